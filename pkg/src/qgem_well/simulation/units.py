# Standard Library
import logging
import math

# First Party
from qgem_well.constants import (
    ADIABATIC_RATIO_THRESHOLD,
    DENSITY_RATIO_THRESHOLD,
    KB_PRODUCT_THRESHOLD,
)
from qgem_well.exceptions import InvalidParameterError, InvalidRangeError
from qgem_well.schema.feasibility import AdiabaticityReport, FeasibilityReport
from qgem_well.schema.physical_params import PhysicalParams
from qgem_well.schema.scaled_params import ScaledParams

logger = logging.getLogger(__name__)


def energy_unit(p: PhysicalParams) -> float:
    """E0 = pi^2 hbar^2 / (m L^2), in J."""
    return (math.pi * p.hbar) ** 2 / (p.mass * p.well_width**2)


def scale_params(p: PhysicalParams, nmax: int) -> ScaledParams:
    """
        Map laboratory parameters onto the dimensionless problem. In these units level n of one
        well carries kinetic energy n^2/2 and the interaction is -gamma/(u1 + u2 + delta).
    :param p:
        Physical parameters in SI units
    :param nmax:
        Sine-basis size per particle
    :return: ScaledParams
    """
    if nmax < 2:
        raise InvalidParameterError(f"nmax must be at least 2, got {nmax}")
    e0 = energy_unit(p)
    gamma = p.grav_constant * p.mass**3 * p.well_width / (math.pi * p.hbar) ** 2
    return ScaledParams(
        gamma=gamma,
        delta=p.separation / p.well_width,
        nmax=nmax,
        energy_unit=e0,
        time_unit=p.hbar / e0,
    )


def unscale_params(
    s: ScaledParams, grav_constant: float, hbar: float
) -> tuple[float, float, float]:
    """
        Recover (mass, well_width, separation) in SI units from a ScaledParams
    """
    if s.gamma <= 0 or grav_constant <= 0:
        raise InvalidParameterError("the inverse map needs gamma > 0 and G > 0")
    mass = (s.gamma * math.pi * hbar * math.sqrt(s.energy_unit) / grav_constant) ** 0.4
    well_width = math.pi * hbar / math.sqrt(mass * s.energy_unit)
    return mass, well_width, s.delta * well_width


def newtonian_shift_estimate(p: PhysicalParams) -> float:
    """The crude high-level asymptote -G m^2 / L in units of E0, numerically equal to -gamma."""
    return -p.grav_constant * p.mass**2 / p.well_width / energy_unit(p)


def adiabaticity_check(
    d_ini: float,
    d_f: float,
    v: float,
    p: PhysicalParams,
    threshold: float = ADIABATIC_RATIO_THRESHOLD,
) -> AdiabaticityReport:
    """
        Compare the approach time tau_c = (d_ini - d_f)/v with the oscillation time
        tau_o = 2 pi hbar / E_ini, E_ini = E0/2 being the single-well ground energy
    :param d_ini:
        Initial separation in m
    :param d_f:
        Final separation in m
    :param v:
        Relative approach velocity in m/s
    :param p:
        Physical parameters
    :param threshold:
        Ratio above which the approach counts as adiabatic
    :return: AdiabaticityReport
    """
    if d_f <= 0 or v <= 0:
        raise InvalidParameterError(f"d_f and v must be positive, got d_f={d_f}, v={v}")
    if d_ini <= d_f:
        raise InvalidRangeError(f"d_ini ({d_ini}) must exceed d_f ({d_f})")
    tau_c = (d_ini - d_f) / v
    e_ini = energy_unit(p) / 2.0
    tau_o = 2.0 * math.pi * p.hbar / e_ini
    ratio = tau_c / tau_o
    logger.debug(f"tau_c={tau_c:.6g} s, tau_o={tau_o:.6g} s, ratio={ratio:.6g}")
    return AdiabaticityReport(tau_c=tau_c, tau_o=tau_o, ratio=ratio, threshold=threshold, adiabatic=ratio > threshold)


def pseudopotential_check(
    p: PhysicalParams,
    density: float,
    range_b: float,
    kb_threshold: float = KB_PRODUCT_THRESHOLD,
    density_ratio_threshold: float = DENSITY_RATIO_THRESHOLD,
) -> FeasibilityReport:
    """
        Contact-pseudopotential conditions: k b << 1 and density^(-1/3) >> b, with k the
        ground-state wave number sqrt(2 m <E_kin>)/hbar and <E_kin> = E0/2
    """
    if density <= 0 or range_b <= 0:
        raise InvalidParameterError(f"density and range_b must be positive, got {density}, {range_b}")
    kinetic = energy_unit(p) / 2.0
    k_wavenumber = math.sqrt(2.0 * p.mass * kinetic) / p.hbar
    kb_product = k_wavenumber * range_b
    density_ratio = density ** (-1.0 / 3.0) / range_b
    return FeasibilityReport(
        k_wavenumber=k_wavenumber,
        kb_product=kb_product,
        density_ratio=density_ratio,
        flags={
            "kb_small": kb_product < kb_threshold,
            "dilute": density_ratio > density_ratio_threshold,
        },
    )


def default_density(p: PhysicalParams) -> float:
    """One particle per L^3."""
    return 1.0 / p.well_width**3


def feasibility_report(
    p: PhysicalParams,
    d_ini: float,
    d_f: float,
    v: float,
    density: float,
    range_b: float,
    adiabatic_threshold: float = ADIABATIC_RATIO_THRESHOLD,
    kb_threshold: float = KB_PRODUCT_THRESHOLD,
    density_ratio_threshold: float = DENSITY_RATIO_THRESHOLD,
) -> FeasibilityReport:
    adiabatic = adiabaticity_check(d_ini, d_f, v, p, adiabatic_threshold)
    pseudo = pseudopotential_check(p, density, range_b, kb_threshold, density_ratio_threshold)
    return pseudo.model_copy(
        update={
            "tau_c": adiabatic.tau_c,
            "tau_o": adiabatic.tau_o,
            "adiabatic_ratio": adiabatic.ratio,
            "flags": {**pseudo.flags, "adiabatic": adiabatic.adiabatic},
        }
    )
