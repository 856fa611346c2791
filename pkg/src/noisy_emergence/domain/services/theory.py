# -*- coding: utf-8 -*-
"""
Servicio de teoría.

Calcula las constantes del estado inicial de los cuatro sistemas, comprueba
las hipótesis de cada teorema caso por caso, evalúa las cotas inferiores de
probabilidad y verifica las envolventes deterministas sobre trazas producidas
con ruido recortado (o sin ruido).

Convenciones:
- Los horizontes discretos se redondean hacia arriba antes de exponenciar.
- En los sistemas continuos ℋ₀ se calcula con K (no existe G en ese caso).
- El T₀ continuo usa B₀^β tal como está definido; el discreto usa U₀^β.
"""
import logging
import math
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from noisy_emergence.domain.errors import DomainError
from noisy_emergence.domain.models.coupling import HypothesisCheck
from noisy_emergence.domain.models.system import SystemParams, SystemState, SystemVariant, Trajectory
from noisy_emergence.domain.models.theory import (
    BoundReport,
    EmergenceConstants,
    EnvelopeCheck,
    HypothesisCase,
    TheoremCheck,
    TheoremTag,
    ViolationReport,
)
from noisy_emergence.domain.services.quotient_space import inner_scale
from noisy_emergence.domain.services.systems import norm_of_x, norm_of_y

logger = logging.getLogger(__name__)

CASE_TOLERANCE = 1e-12
TRACE_TOLERANCE = 1e-9
ROUNDING_SLACK = 1e-9

DiscreteCdf = Callable[[float], float]
PathCdf = Callable[[float, float], float]


# ----------------------------------------------------------------------
# Funciones escalares
# ----------------------------------------------------------------------

def q_of_delta(delta: float) -> float:
    """Q(δ) = max(1, 1/δ)."""
    if not delta > 0:
        raise DomainError(f"δ debe ser positiva, recibido {delta}")
    return max(1.0, 1.0 / delta)


def _m_function(z: float, s: float, q: float, c1: float, c2: float) -> float:
    return z ** s - c1 * z ** q - c2


def root_upper_bound(s: float, q: float, c1: float, c2: float) -> float:
    return max((2.0 * c1) ** (1.0 / (s - q)), (2.0 * c2) ** (1.0 / s))


def positive_root(s: float, q: float, c1: float, c2: float) -> float:
    """
    Única raíz positiva de M(z) = z^s − c₁z^q − c₂.

    Se acota en [0, max{(2c₁)^{1/(s−q)}, (2c₂)^{1/s}}], donde M cambia de
    signo, se resuelve con brentq y se pule con un paso de Newton.

    Raises:
        DomainError: Si no se cumple s > q > 0 o c₁, c₂ > 0
    """
    if not (s > q > 0):
        raise DomainError(f"Se requiere s > q > 0, recibido s={s}, q={q}")
    if not (c1 > 0 and c2 > 0):
        raise DomainError(f"Se requiere c₁, c₂ > 0, recibido c₁={c1}, c₂={c2}")
    upper = root_upper_bound(s, q, c1, c2)
    if _m_function(upper, s, q, c1, c2) == 0.0:
        return upper
    root = brentq(_m_function, 0.0, upper, args=(s, q, c1, c2), xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    derivative = s * root ** (s - 1.0) - c1 * q * root ** (q - 1.0)
    if derivative > 0:
        polished = root - _m_function(root, s, q, c1, c2) / derivative
        if 0.0 < polished <= upper and \
                abs(_m_function(polished, s, q, c1, c2)) <= abs(_m_function(root, s, q, c1, c2)):
            root = polished
    residual = abs(_m_function(root, s, q, c1, c2))
    if residual > 1e-10 * max(1.0, c2):
        logger.warning("Residuo de M(z*) = %.3e mayor que la tolerancia", residual)
    return root


def _log_ratio_time(rate_inverse: float, numerator: float, target: Optional[float],
                    strict: bool, label: str, reasons: List[str]) -> Optional[float]:
    """rate_inverse·ln(numerator/target) si el objetivo es admisible; si no, registra el motivo."""
    if target is None:
        return None
    if not target > 0:
        reasons.append(f"{label}: el objetivo debe ser positivo")
        return None
    if target > numerator or (strict and target == numerator):
        relation = "<" if strict else "≤"
        reasons.append(f"{label}: se requiere objetivo {relation} {numerator:.6g}, recibido {target:.6g}")
        return None
    if target == numerator:
        return 0.0
    if not math.isfinite(rate_inverse):
        reasons.append(f"{label}: el horizonte no es finito")
        return None
    return rate_inverse * math.log(numerator / target)


def _norms(initial: SystemState, params: SystemParams):
    return norm_of_x(np.asarray(initial.x, dtype=float), params), norm_of_y(np.asarray(initial.y, dtype=float), params)


def _case_of(exponent: float) -> HypothesisCase:
    if abs(exponent - 1.0) <= CASE_TOLERANCE:
        return HypothesisCase.II
    return HypothesisCase.I if exponent < 1.0 else HypothesisCase.III


# ----------------------------------------------------------------------
# Constantes
# ----------------------------------------------------------------------

def constants_ID(initial: SystemState, params: SystemParams, mu: Optional[float] = None,
                 nu: Optional[float] = None) -> EmergenceConstants:
    """
    Constantes de I(D): Q, a, b, U₀, B₀, ℋ₀, paso admisible y T₀, T₁.

    Raises:
        DomainError: Si ||y(0)|| = 0
    """
    nx0, ny0 = _norms(initial, params)
    if not ny0 > 0:
        raise DomainError("Las constantes requieren ||y(0)|| > 0")
    G, beta, gamma, delta, C, h = params.coupling, params.beta, params.gamma, params.delta, params.C, params.h
    Q = q_of_delta(delta)
    a = (2.0 * C / G) * Q * ny0 ** delta
    b = 1.0 + nx0
    s = beta + gamma
    case = _case_of(s)
    reasons: List[str] = []
    if case is HypothesisCase.I:
        U0 = max((2.0 * a) ** (1.0 / (1.0 - s)), 2.0 * b)
    elif case is HypothesisCase.II:
        if a < 1.0:
            U0 = b / (1.0 - a)
        else:
            U0 = math.inf
            reasons.append(f"caso (ii) requiere a < 1, a = {a:.6g}")
    else:
        U0 = s * b / (s - 1.0)
    B0 = U0 - 1.0
    H0 = 2.0 ** (-beta - 1.0) * G / U0 ** beta
    if H0 > G / 2.0 * (1.0 + CASE_TOLERANCE):
        raise DomainError(f"ℋ₀ = {H0} supera G/2")
    if beta == 0 or H0 == 0.0:
        second = math.inf
    else:
        second = (1.0 / (2.0 ** (1.0 - gamma) * C * ny0 ** delta)) * (G / (2.0 * H0)) ** ((1.0 - gamma) / beta)
    h_max = min(1.0 / G, second)
    contraction = 1.0 - h * G / (2.0 * U0 ** beta)
    x_cap = a * U0 ** s
    rate = 2.0 * U0 ** beta / (h * G) if h > 0 else math.inf
    T0 = _log_ratio_time(rate, ny0, nu, strict=True, label="ν", reasons=reasons)
    T1 = _log_ratio_time(rate / delta, x_cap, mu, strict=False, label="μ", reasons=reasons) \
        if math.isfinite(x_cap) else None
    return EmergenceConstants(
        variant=SystemVariant.I_D, norm_x0=nx0, norm_y0=ny0, mu=mu, nu=nu, Q=Q, a=a, b=b,
        exponent=s, U0=U0, B0=B0, H0=H0, T0=T0, T1=T1, h_max=h_max, contraction=contraction,
        x_cap=x_cap, case=case, reasons=reasons,
        formulas={
            "H0": "2^(-beta-1) G / U0^beta",
            "T0": "(2 U0^beta / (h G)) ln(||y(0)|| / nu)",
            "T1": "(2 U0^beta / (delta h G)) ln(a U0^(beta+gamma) / mu)",
        },
    )


def constants_IID(initial: SystemState, params: SystemParams, mu: Optional[float] = None,
                  nu: Optional[float] = None) -> EmergenceConstants:
    """Constantes de II(D): ℋ₁, ℋ₂, T₂, T₃; el paso h_i ≥ 1/G_i marca la cota como inaplicable."""
    nx0, ny0 = _norms(initial, params)
    reasons: List[str] = []
    H1 = params.coupling_1 / (2.0 * (1.0 + ny0) ** params.beta_1)
    H2 = params.coupling_2 / (2.0 * (1.0 + nx0) ** params.beta_2)
    if not params.h_1 < 1.0 / params.coupling_1:
        reasons.append(f"h₁ debe ser < 1/G₁ = {1.0 / params.coupling_1:.6g}")
    if not params.h_2 < 1.0 / params.coupling_2:
        reasons.append(f"h₂ debe ser < 1/G₂ = {1.0 / params.coupling_2:.6g}")
    rate_1 = 1.0 / (params.h_1 * H1) if params.h_1 > 0 else math.inf
    rate_2 = 1.0 / (params.h_2 * H2) if params.h_2 > 0 else math.inf
    T2 = _log_ratio_time(rate_1, nx0, mu, strict=False, label="μ", reasons=reasons)
    T3 = _log_ratio_time(rate_2, ny0, nu, strict=False, label="ν", reasons=reasons)
    return EmergenceConstants(
        variant=SystemVariant.II_D, norm_x0=nx0, norm_y0=ny0, mu=mu, nu=nu,
        H1=H1, H2=H2, T2=T2, T3=T3, h_max=min(1.0 / params.coupling_1, 1.0 / params.coupling_2),
        reasons=reasons,
        formulas={
            "H1": "G1 / (2 (1 + ||y(0)||)^beta1)",
            "H2": "G2 / (2 (1 + ||x(0)||)^beta2)",
            "T2": "ln(||x(0)|| / mu) / (h1 H1)",
            "T3": "ln(||y(0)|| / nu) / (h2 H2)",
        },
    )


def constants_IC(initial: SystemState, params: SystemParams, mu: Optional[float] = None,
                 nu: Optional[float] = None) -> EmergenceConstants:
    """
    Constantes de I(C): a, b, α, U₀, B₀, B₁, ℋ₀ (con K), T₀ y T₁.

    Raises:
        DomainError: Si ||y(0)|| = 0
    """
    nx0, ny0 = _norms(initial, params)
    if not ny0 > 0:
        raise DomainError("Las constantes requieren ||y(0)|| > 0")
    K, beta, gamma, delta, C = params.coupling, params.beta, params.gamma, params.delta, params.C
    power = 2.0 / (1.0 - gamma)
    a = 2.0 ** ((1.0 + gamma + 2.0 * beta) / (1.0 - gamma)) * ((1.0 - gamma) * C) ** power \
        * ny0 ** (2.0 * delta / (1.0 - gamma)) / (delta * K) ** power
    b = 2.0 ** ((1.0 + gamma) / (1.0 - gamma)) * (1.0 + nx0 ** 2)
    alpha = 2.0 * beta / (1.0 - gamma)
    exponent = 2.0 * beta + gamma
    case = _case_of(exponent)
    reasons: List[str] = []
    if case is HypothesisCase.I:
        U0 = max((2.0 * a) ** ((1.0 - gamma) / (1.0 - gamma - 2.0 * beta)), 2.0 * b)
    elif case is HypothesisCase.II:
        if a < 1.0:
            U0 = b / (1.0 - a)
        else:
            U0 = math.inf
            reasons.append(f"caso (ii) requiere a < 1, a = {a:.6g}")
    else:
        U0 = (1.0 / (a * alpha)) ** (1.0 / (alpha - 1.0))
    B0 = U0 - 1.0
    B1 = 2.0 * C * ny0 ** delta * B0 ** (gamma / 2.0 + beta) / (delta * K)
    H0 = 2.0 ** (-beta - 1.0) * K / U0 ** beta
    if H0 > K / 2.0 * (1.0 + CASE_TOLERANCE):
        raise DomainError(f"ℋ₀ = {H0} supera K/2")
    rate = 2.0 * B0 ** beta / K
    T0 = _log_ratio_time(rate, ny0, nu, strict=True, label="ν", reasons=reasons)
    T1 = _log_ratio_time(rate / delta, B1, mu, strict=False, label="μ", reasons=reasons) \
        if math.isfinite(B1) else None
    return EmergenceConstants(
        variant=SystemVariant.I_C, norm_x0=nx0, norm_y0=ny0, mu=mu, nu=nu, a=a, b=b, alpha=alpha,
        exponent=exponent, U0=U0, B0=B0, B1=B1, H0=H0, T0=T0, T1=T1,
        contraction=K / (2.0 * B0 ** beta) if B0 > 0 else None, x_cap=B1, case=case, reasons=reasons,
        formulas={
            "H0": "2^(-beta-1) K / U0^beta (K sustituye a G)",
            "T0": "(2 B0^beta / K) ln(||y(0)|| / nu) (B0^beta, no U0^beta)",
            "T1": "(2 B0^beta / (K delta)) ln(B1 / mu)",
        },
    )


def constants_IIC(initial: SystemState, params: SystemParams, mu: Optional[float] = None,
                  nu: Optional[float] = None) -> EmergenceConstants:
    """Constantes de II(C): ℋ₁ = K₂/(2(1+||y(0)||²)^{β₂}), ℋ₂ = K₁/(2(1+||x(0)||²)^{β₁}), T₂, T₃."""
    nx0, ny0 = _norms(initial, params)
    reasons: List[str] = []
    H1 = params.coupling_2 / (2.0 * (1.0 + ny0 ** 2) ** params.beta_2)
    H2 = params.coupling_1 / (2.0 * (1.0 + nx0 ** 2) ** params.beta_1)
    T2 = _log_ratio_time(1.0 / H1, nx0, mu, strict=False, label="μ", reasons=reasons)
    T3 = _log_ratio_time(1.0 / H2, ny0, nu, strict=False, label="ν", reasons=reasons)
    return EmergenceConstants(
        variant=SystemVariant.II_C, norm_x0=nx0, norm_y0=ny0, mu=mu, nu=nu,
        H1=H1, H2=H2, T2=T2, T3=T3, reasons=reasons,
        formulas={
            "H1": "K2 / (2 (1 + ||y(0)||^2)^beta2)",
            "H2": "K1 / (2 (1 + ||x(0)||^2)^beta1)",
            "T2": "(2 (1 + ||y(0)||^2)^beta2 / K2) ln(||x(0)|| / mu)",
            "T3": "(2 (1 + ||x(0)||^2)^beta1 / K1) ln(||y(0)|| / nu)",
        },
    )


def compute_constants(initial: SystemState, params: SystemParams, mu: Optional[float] = None,
                      nu: Optional[float] = None) -> EmergenceConstants:
    dispatch = {
        SystemVariant.I_D: constants_ID,
        SystemVariant.II_D: constants_IID,
        SystemVariant.I_C: constants_IC,
        SystemVariant.II_C: constants_IIC,
    }
    return dispatch[params.variant](initial, params, mu, nu)


# ----------------------------------------------------------------------
# Hipótesis de los teoremas
# ----------------------------------------------------------------------

def check_hypotheses_thm1(initial: SystemState, params: SystemParams,
                          constants: Optional[EmergenceConstants] = None) -> TheoremCheck:
    """
    Identifica el caso (i)/(ii)/(iii) según β + γ y evalúa su desigualdad,
    la cota del paso y que 1 − hG/(2U₀^β) ∈ (0, 1).
    """
    constants = constants or constants_ID(initial, params)
    G, h, gamma, delta, C = params.coupling, params.h, params.gamma, params.delta, params.C
    s, a, b, Q = constants.exponent, constants.a, constants.b, constants.Q
    checks = [
        HypothesisCheck.evaluate("step_positive", h, '>', 0.0),
        HypothesisCheck.evaluate("step_bound", h, '<', constants.h_max),
    ]
    if constants.case is HypothesisCase.II:
        bound = (G / (2.0 * C * Q)) ** (1.0 / delta)
        checks.append(HypothesisCheck.evaluate("case_ii_initial_velocity", constants.norm_y0, '<', bound))
    elif constants.case is HypothesisCase.III:
        lhs = (1.0 / (a * s)) ** (1.0 / (s - 1.0)) * (s - 1.0) / s
        rhs = b + h * ((s / (s - 1.0)) * b) ** gamma * a * G / (2.0 * Q)
        checks.append(HypothesisCheck.evaluate("case_iii_inequality", lhs, '>', rhs))
    checks.append(HypothesisCheck.evaluate("contraction_positive", constants.contraction, '>', 0.0))
    checks.append(HypothesisCheck.evaluate("contraction_below_one", constants.contraction, '<', 1.0))
    return TheoremCheck(theorem=TheoremTag.THM1.value, case=constants.case, checks=checks)


def check_hypotheses_thm2(initial: SystemState, params: SystemParams,
                          constants: Optional[EmergenceConstants] = None) -> TheoremCheck:
    """h₁ < 1/G₁, h₂ < 1/G₂ y pasos positivos."""
    checks = [
        HypothesisCheck.evaluate("step_1_positive", params.h_1, '>', 0.0),
        HypothesisCheck.evaluate("step_1_bound", params.h_1, '<', 1.0 / params.coupling_1),
        HypothesisCheck.evaluate("step_2_positive", params.h_2, '>', 0.0),
        HypothesisCheck.evaluate("step_2_bound", params.h_2, '<', 1.0 / params.coupling_2),
    ]
    return TheoremCheck(theorem=TheoremTag.THM2.value, case=HypothesisCase.NONE, checks=checks)


def check_hypotheses_thm3(initial: SystemState, params: SystemParams,
                          constants: Optional[EmergenceConstants] = None) -> TheoremCheck:
    """Caso (i)/(ii)/(iii) según 2β + γ con sus desigualdades."""
    constants = constants or constants_IC(initial, params)
    K, gamma, delta, C, beta = params.coupling, params.gamma, params.delta, params.C, params.beta
    checks = []
    if constants.case is HypothesisCase.II:
        bound = ((delta * K) ** 2 / (2.0 ** (1.0 + gamma + 2.0 * beta) * ((1.0 - gamma) * C) ** 2)) \
            ** (1.0 / (2.0 * delta))
        checks.append(HypothesisCheck.evaluate("case_ii_initial_velocity", constants.norm_y0, '<', bound))
    elif constants.case is HypothesisCase.III:
        alpha, a, b = constants.alpha, constants.a, constants.b
        lhs = (1.0 / (a * alpha)) ** (1.0 / (alpha - 1.0)) * (alpha - 1.0) / alpha
        checks.append(HypothesisCheck.evaluate("case_iii_inequality", lhs, '>', b))
    return TheoremCheck(theorem=TheoremTag.THM3.value, case=constants.case, checks=checks)


def check_hypotheses_thm4(initial: SystemState, params: SystemParams,
                          constants: Optional[EmergenceConstants] = None) -> TheoremCheck:
    """El sistema II(C) no impone condiciones adicionales sobre los parámetros."""
    return TheoremCheck(theorem=TheoremTag.THM4.value, case=HypothesisCase.NONE, checks=[])


def check_hypotheses(initial: SystemState, params: SystemParams,
                     constants: Optional[EmergenceConstants] = None) -> TheoremCheck:
    dispatch = {
        SystemVariant.I_D: check_hypotheses_thm1,
        SystemVariant.II_D: check_hypotheses_thm2,
        SystemVariant.I_C: check_hypotheses_thm3,
        SystemVariant.II_C: check_hypotheses_thm4,
    }
    return dispatch[params.variant](initial, params, constants)


# ----------------------------------------------------------------------
# Cotas de probabilidad
# ----------------------------------------------------------------------

def iteration_count(T: float) -> int:
    """⌈T⌉ con una holgura de redondeo para que valores como 92.0000000001 no salten."""
    return max(0, int(math.ceil(T - ROUNDING_SLACK)))


def default_theorem(variant: SystemVariant, cdfs: Sequence, joint: bool = False) -> TheoremTag:
    """Cota que corresponde a la variante; en II(C), la de una sola fuente (cor1) si alguna fuente de ruido es nula."""
    if variant is SystemVariant.I_D:
        return TheoremTag.THM1_JOINT if joint else TheoremTag.THM1
    if variant is SystemVariant.II_D:
        return TheoremTag.THM2
    if variant is SystemVariant.I_C:
        return TheoremTag.THM3_JOINT if joint else TheoremTag.THM3
    padded = list(cdfs) + [None, None]
    if padded[0] is None or padded[1] is None:
        return TheoremTag.COR1
    return TheoremTag.THM4


def probability_bound(theorem, constants: EmergenceConstants, cdfs: Sequence,
                      mu: Optional[float] = None, nu: Optional[float] = None,
                      checks: Optional[List[HypothesisCheck]] = None) -> BoundReport:
    """
    Evalúa la cota inferior de probabilidad de un teorema.

    Args:
        theorem: Etiqueta (thm1, thm1-joint, thm2, thm3, thm3-joint, thm4, cor1)
        constants: Constantes del estado inicial
        cdfs: F (o F₁, F₂). En los teoremas discretos cada una es x ↦ F(x);
            en los continuos (x, T) ↦ F(x, T). None significa ruido nulo (F ≡ 1).
        mu, nu: Objetivos; por defecto los de `constants`
        checks: Hipótesis ya evaluadas que se adjuntan al informe

    Returns:
        BoundReport; la probabilidad es None si la cota no es aplicable
    """
    tag = TheoremTag(theorem)
    mu = constants.mu if mu is None else mu
    nu = constants.nu if nu is None else nu
    padded = list(cdfs) + [None, None]
    f1, f2 = padded[0], padded[1]
    report = BoundReport(theorem=tag, probability=None, checks=list(checks or []),
                         reasons=list(constants.reasons))

    def discrete(cdf, x):
        return 1.0 if cdf is None else float(cdf(x))

    def continuous(cdf, x, T):
        return 1.0 if cdf is None else float(cdf(x, T))

    if tag in (TheoremTag.THM1, TheoremTag.THM1_JOINT, TheoremTag.THM3, TheoremTag.THM3_JOINT):
        if nu is None or constants.T0 is None or constants.H0 is None:
            report.reasons.append("se requiere ν < ||y(0)|| para esta cota")
            return report
        horizon = constants.T0
        if tag in (TheoremTag.THM1_JOINT, TheoremTag.THM3_JOINT):
            if mu is None or constants.T1 is None:
                report.reasons.append("el evento conjunto requiere μ admisible")
                return report
            horizon = max(constants.T0, constants.T1)
        threshold = constants.H0 * nu
        report.thresholds["F"] = threshold
        report.horizon_raw = horizon
        if tag in (TheoremTag.THM1, TheoremTag.THM1_JOINT):
            count = iteration_count(horizon)
            factor = discrete(f1, threshold)
            report.horizon = float(count)
            report.factors["F"] = factor
            report.probability = factor ** count
        else:
            factor = continuous(f1, threshold, horizon)
            report.horizon = horizon
            report.factors["F"] = factor
            report.probability = factor
        return report

    if mu is None or nu is None or constants.T2 is None or constants.T3 is None:
        report.reasons.append("se requieren μ ≤ ||x(0)|| y ν ≤ ||y(0)||")
        return report
    threshold_1 = constants.H1 * mu
    threshold_2 = constants.H2 * nu
    report.thresholds.update({"F1": threshold_1, "F2": threshold_2})
    horizon = max(constants.T2, constants.T3)

    if tag is TheoremTag.THM2:
        count = iteration_count(horizon)
        factor_1 = discrete(f1, threshold_1)
        factor_2 = discrete(f2, threshold_2)
        report.factors.update({"F1": factor_1, "F2": factor_2})
        report.horizon_raw = horizon
        report.horizon = float(count)
        report.probability = (factor_1 * factor_2) ** count
    elif tag is TheoremTag.THM4:
        factor_1 = continuous(f1, threshold_1, horizon)
        factor_2 = continuous(f2, threshold_2, horizon)
        report.factors.update({"F1": factor_1, "F2": factor_2})
        report.horizon_raw = report.horizon = horizon
        report.probability = factor_1 * factor_2
    else:
        if f1 is None and f2 is None:
            report.probability = 1.0
        elif f1 is None:
            factor = continuous(f2, threshold_2, constants.T3)
            report.factors["F2"] = factor
            report.probability = factor
        elif f2 is None:
            factor = continuous(f1, threshold_1, constants.T2)
            report.factors["F1"] = factor
            report.probability = factor
        else:
            report.reasons.append("la cota cor1 requiere que una de las fuentes de ruido sea nula")
            return report
        report.horizon_raw = report.horizon = horizon
    report.probability = min(1.0, max(0.0, report.probability))
    return report


# ----------------------------------------------------------------------
# Verificación de trayectorias
# ----------------------------------------------------------------------

def _envelope(name: str, lhs: np.ndarray, rhs: np.ndarray, steps: np.ndarray,
              tolerance: float = TRACE_TOLERANCE) -> EnvelopeCheck:
    check = EnvelopeCheck(name=name)
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if lhs.size == 0:
        return check
    slack = rhs - lhs
    allowed = -tolerance * np.maximum(1.0, np.abs(np.where(np.isfinite(rhs), rhs, 1.0)))
    bad = np.nonzero(slack < allowed)[0]
    check.evaluated = int(lhs.size)
    check.worst_slack = float(np.min(slack))
    if bad.size:
        check.first_violation = int(steps[bad[0]])
    return check


def _x_distances(xs: np.ndarray, reference: np.ndarray, params: SystemParams) -> np.ndarray:
    """Normas de xs[τ] − reference para todo τ (los representantes ya están centrados)."""
    diff = (xs - reference).reshape(len(xs), -1)
    scale = inner_scale(xs.shape[1], params.inner) if params.x_is_quotient else 1.0
    return np.sqrt(scale) * np.linalg.norm(diff, axis=1)


def cauchy_tail(trajectory: Trajectory, params: SystemParams, start: int, mu: float) -> EnvelopeCheck:
    """max_{τ>t} ||x[τ] − x[t]|| ≤ μ para t ≥ start."""
    lhs, steps = [], []
    for index in range(start, trajectory.length - 1):
        distances = _x_distances(trajectory.xs[index + 1:], trajectory.xs[index], params)
        lhs.append(float(np.max(distances)))
        steps.append(int(trajectory.steps[index]))
    return _envelope("cauchy_tail", np.array(lhs), np.full(len(lhs), mu), np.array(steps, dtype=int))


def _skip_notice(trajectory: Trajectory, constants: EmergenceConstants) -> Optional[str]:
    if trajectory.aborted:
        return f"traza abortada: {trajectory.aborted}"
    if not trajectory.conditioned:
        return "la traza no se produjo con ruido recortado ni sin ruido; comprobaciones omitidas"
    if trajectory.noise_free or trajectory.clip_thresholds is None:
        return None
    if trajectory.variant.is_coupled:
        limits = (constants.H1, constants.H2)
    else:
        limits = (constants.H0,)
    for used, limit in zip(trajectory.clip_thresholds, limits):
        if used is not None and limit is not None and used > limit * (1.0 + TRACE_TOLERANCE):
            return (f"umbral de recorte {used:.6g} mayor que el de las constantes {limit:.6g}; "
                    "comprobaciones omitidas")
    return None


def _verify_ID(trajectory: Trajectory, constants: EmergenceConstants, params: SystemParams,
               report: ViolationReport) -> None:
    h, G, beta, delta = params.h, params.coupling, params.beta, params.delta
    nx, ny, steps = trajectory.norm_x, trajectory.norm_y, trajectory.steps
    factors = 1.0 - h * G / (1.0 + nx[:-1]) ** beta + h * constants.H0
    report.checks.append(_envelope("step_factor", ny[1:], factors * ny[:-1], steps[1:]))
    t = steps.astype(float)
    c = constants.contraction
    report.checks.append(_envelope("velocity_envelope", ny, constants.norm_y0 * c ** t, steps))
    report.checks.append(_envelope("position_bound", nx, np.full(len(nx), constants.B0), steps))
    x_hat = trajectory.xs[-1]
    report.limit_point_norm = norm_of_x(x_hat, params)
    distances = _x_distances(trajectory.xs, x_hat, params)
    report.checks.append(_envelope("limit_point", distances, constants.x_cap * c ** (delta * t), steps))
    if constants.T0 is not None and constants.T1 is not None and constants.mu is not None:
        start = iteration_count(max(constants.T0, constants.T1))
        report.checks.append(cauchy_tail(trajectory, params, start, constants.mu))


def _verify_IID(trajectory: Trajectory, constants: EmergenceConstants, params: SystemParams,
                report: ViolationReport) -> None:
    nx, ny, steps = trajectory.norm_x, trajectory.norm_y, trajectory.steps
    h1, h2 = params.h_1, params.h_2
    factors_x = 1.0 - h1 * params.coupling_1 / (1.0 + ny[:-1]) ** params.beta_1 + h1 * constants.H1
    factors_y = 1.0 - h2 * params.coupling_2 / (1.0 + nx[:-1]) ** params.beta_2 + h2 * constants.H2
    report.checks.append(_envelope("step_factor_x", nx[1:], factors_x * nx[:-1], steps[1:]))
    report.checks.append(_envelope("step_factor_y", ny[1:], factors_y * ny[:-1], steps[1:]))
    t = steps.astype(float)
    report.checks.append(_envelope("position_envelope", nx,
                                   constants.norm_x0 * (1.0 - h1 * constants.H1) ** t, steps))
    report.checks.append(_envelope("velocity_envelope", ny,
                                   constants.norm_y0 * (1.0 - h2 * constants.H2) ** t, steps))


def _verify_IC(trajectory: Trajectory, constants: EmergenceConstants, params: SystemParams,
               report: ViolationReport) -> None:
    K, beta, gamma, delta, C = params.coupling, params.beta, params.gamma, params.delta, params.C
    steps, times = trajectory.steps, trajectory.times
    gamma_x = trajectory.norm_x ** 2
    lam = trajectory.norm_y ** 2
    theta = np.minimum.accumulate(trajectory.coercivity)
    H0 = constants.H0
    report.checks.append(_envelope("energy_decay", lam, lam[0] * np.exp(-2.0 * times * (theta - H0)), steps))
    mask = theta > H0
    if np.any(mask):
        power = 2.0 / (1.0 - gamma)
        bound = 2.0 ** ((1.0 + gamma) / (1.0 - gamma)) * (
            (1.0 + gamma_x[0])
            + ((1.0 - gamma) * C) ** power * lam[0] ** (delta / (1.0 - gamma))
            / (delta * (theta[mask] - H0)) ** power
        ) - 1.0
        report.checks.append(_envelope("state_bound", gamma_x[mask], bound, steps[mask]))
    B0 = constants.B0
    report.checks.append(_envelope("position_bound", gamma_x, np.full(len(gamma_x), B0), steps))
    report.checks.append(_envelope("energy_envelope", lam, lam[0] * np.exp(-K * times / B0 ** beta), steps))
    x_hat = trajectory.xs[-1]
    report.limit_point_norm = norm_of_x(x_hat, params)
    distances = _x_distances(trajectory.xs, x_hat, params)
    report.checks.append(_envelope("limit_point", distances,
                                   constants.B1 * np.exp(-delta * K * times / (2.0 * B0 ** beta)), steps))
    if constants.T0 is not None and constants.T1 is not None and constants.mu is not None:
        horizon = max(constants.T0, constants.T1)
        hits = np.nonzero(times >= horizon - ROUNDING_SLACK)[0]
        if hits.size:
            report.checks.append(cauchy_tail(trajectory, params, int(hits[0]), constants.mu))


def _verify_IIC(trajectory: Trajectory, constants: EmergenceConstants, params: SystemParams,
                report: ViolationReport) -> None:
    steps, times = trajectory.steps, trajectory.times
    lam_x = trajectory.norm_x ** 2
    lam_y = trajectory.norm_y ** 2
    dt = float(times[1] - times[0]) if len(times) > 1 else 0.0
    xi = trajectory.coercivity
    eta = trajectory.coercivity_2
    # Suma de Riemann por la izquierda de ∫₀ᵗ (η − ℋ₁) dτ
    integral_x = np.concatenate([[0.0], np.cumsum(eta[:-1] - constants.H1) * dt])
    integral_y = np.concatenate([[0.0], np.cumsum(xi[:-1] - constants.H2) * dt])
    report.checks.append(_envelope("position_integral_decay", lam_x, lam_x[0] * np.exp(-2.0 * integral_x), steps))
    report.checks.append(_envelope("velocity_integral_decay", lam_y, lam_y[0] * np.exp(-2.0 * integral_y), steps))
    report.checks.append(_envelope("position_envelope", lam_x, lam_x[0] * np.exp(-2.0 * times * constants.H1), steps))
    report.checks.append(_envelope("velocity_envelope", lam_y, lam_y[0] * np.exp(-2.0 * times * constants.H2), steps))


def verify_trajectory(trajectory: Trajectory, constants: EmergenceConstants,
                      params: SystemParams) -> ViolationReport:
    """
    Comprueba en cada instante de la traza las desigualdades deterministas
    que valen bajo el evento de recorte.

    Si la traza no se produjo con ruido recortado al umbral de las
    constantes (o sin ruido), las comprobaciones se omiten con un aviso.
    """
    report = ViolationReport(variant=trajectory.variant)
    notice = _skip_notice(trajectory, constants)
    if notice is not None:
        report.skipped = True
        report.notice = notice
        logger.info("verify_trajectory: %s", notice)
        return report
    if trajectory.j_violations:
        report.notice = f"J violó su cota {trajectory.j_violations} veces; la ejecución no está certificada"
    dispatch = {
        SystemVariant.I_D: _verify_ID,
        SystemVariant.II_D: _verify_IID,
        SystemVariant.I_C: _verify_IC,
        SystemVariant.II_C: _verify_IIC,
    }
    dispatch[trajectory.variant](trajectory, constants, params, report)
    if not report.passed:
        logger.info("Envolventes violadas en %s: %s", trajectory.variant.value,
                    ", ".join(check.name for check in report.checks if not check.passed))
    return report
