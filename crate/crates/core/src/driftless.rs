//! Exact energies and resilience bounds for `ẋ = B u`.
//!
//! The displacement convention is `x̃ = x0 - x_tg` throughout. With the target
//! shifted to the origin every expression depends on `x̃` only.
//!
//! The uncontrolled input enters the malfunctioning energy through
//! `B_c† B_uc`, so the quadratic term of the worst-case total energy is built
//! from `G = (B_c† B_uc)ᵀ (B_c† B_uc)`: its spectrum for the multi-actuator
//! bound and `‖B_c† B_uc‖₂²` for a single lost actuator.

use crate::error::{Error, Result};
use crate::numerics::{
    induced_norm, lambda_max_sym, pinv, sign, spectral_norm, sym_eig, vec_norm, InducedNorm,
    Matrix, VecNorm, Vector,
};

const ADMISSIBLE_SLACK: f64 = 1e-12;

pub(crate) fn check_admissible_mean(u: &Vector) -> Result<()> {
    let norm = vec_norm(u, VecNorm::Inf);
    if norm > 1.0 + ADMISSIBLE_SLACK {
        return Err(Error::Inadmissible { norm });
    }
    Ok(())
}

/// Minimum-energy nominal control and its energy.
#[derive(Debug, Clone)]
pub struct NominalSolution {
    pub energy: f64,
    /// The constant optimal control `-(1/t_f) B† x̃`.
    pub control: Vector,
    /// `t_f ≥ ‖B† x̃‖∞`.
    pub feasible: bool,
}

/// Worst-case total energy for one lost actuator together with the constant
/// uncontrolled input attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorstCase {
    pub energy: f64,
    /// `sign(B_ucᵀ B_c†ᵀ B_c† x̃)`, zero when degenerate.
    pub sign: f64,
    pub degenerate: bool,
}

impl WorstCase {
    /// Constant uncontrolled input value; +1 stands in for a degenerate sign.
    pub fn forcing(&self) -> f64 {
        if self.degenerate {
            1.0
        } else {
            self.sign
        }
    }
}

#[derive(Debug, Clone)]
pub struct DriftlessEnergies {
    pub e_nominal: f64,
    pub e_malf: f64,
    pub e_worst_total_bound: f64,
    /// Only for a single uncontrolled input.
    pub e_worst_total_exact_1act: Option<f64>,
    pub worst_uuc_sign: Option<f64>,
    pub degenerate: bool,
    pub feasible: bool,
}

pub fn feasibility_driftless(b: &Matrix, x_tilde: &Vector, t_f: f64) -> bool {
    t_f >= vec_norm(&(pinv(b) * x_tilde), VecNorm::Inf)
}

/// `(1/t_f) ‖B† x̃‖₂²`. Infeasible horizons still return the formula value.
pub fn nominal_energy_driftless(b: &Matrix, x_tilde: &Vector, t_f: f64) -> NominalSolution {
    let z = pinv(b) * x_tilde;
    NominalSolution {
        energy: z.norm_squared() / t_f,
        feasible: t_f >= vec_norm(&z, VecNorm::Inf),
        control: z / -t_f,
    }
}

/// `(1/t_f) ‖B_c† (x̃ + t_f B_uc ū_uc)‖₂²`.
pub fn malfunctioning_energy_driftless(
    b_c: &Matrix,
    b_uc: &Matrix,
    x_tilde: &Vector,
    t_f: f64,
    u_uc_mean: &Vector,
) -> Result<f64> {
    check_admissible_mean(u_uc_mean)?;
    let shifted = x_tilde + b_uc * u_uc_mean * t_f;
    Ok((pinv(b_c) * shifted).norm_squared() / t_f)
}

/// `Σ λ_i ‖V‖₁²` for the eigendecomposition of `(B_c† B_uc)ᵀ (B_c† B_uc)`.
fn uncontrolled_spectral_term(b_c_pinv: &Matrix, b_uc: &Matrix) -> Result<f64> {
    let gain = b_c_pinv * b_uc;
    let gram = gain.tr_mul(&gain);
    let eig = sym_eig(&gram)?;
    let v1 = induced_norm(&eig.eigenvectors, InducedNorm::One);
    Ok(eig.eigenvalues.iter().map(|l| l * v1 * v1).sum())
}

/// Upper bound on the worst-case total energy for any number of lost
/// actuators.
pub fn worst_case_total_bound_driftless(
    b_c: &Matrix,
    b_uc: &Matrix,
    x_tilde: &Vector,
    t_f: f64,
) -> Result<f64> {
    let bcp = pinv(b_c);
    let p = b_uc.ncols() as f64;
    let z = &bcp * x_tilde;
    let cross = b_uc.transpose() * bcp.transpose() * &z;
    Ok(z.norm_squared() / t_f
        + t_f * (uncontrolled_spectral_term(&bcp, b_uc)? + p)
        + 2.0 * vec_norm(&cross, VecNorm::One))
}

/// Closed-form worst-case total energy when one actuator is lost.
pub fn worst_case_total_exact_1act(
    b_c: &Matrix,
    b_uc: &Matrix,
    x_tilde: &Vector,
    t_f: f64,
) -> Result<WorstCase> {
    if b_uc.ncols() != 1 {
        return Err(Error::NotSingleActuator(b_uc.ncols()));
    }
    let bcp = pinv(b_c);
    let z = &bcp * x_tilde;
    let gain = &bcp * b_uc.column(0);
    let beta = gain.dot(&z);
    let s = sign(beta);
    Ok(WorstCase {
        energy: z.norm_squared() / t_f + t_f * (gain.norm_squared() + 1.0) + 2.0 * beta.abs(),
        sign: s,
        degenerate: s == 0.0,
    })
}

/// `‖B_c† x̃‖₂ / ‖B_c† B_uc ū_uc‖₂`, the horizon minimizing the malfunctioning
/// energy for a fixed uncontrolled mean.
pub fn optimal_final_time(
    b_c: &Matrix,
    b_uc: &Matrix,
    x_tilde: &Vector,
    u_uc_mean: &Vector,
) -> Result<f64> {
    let bcp = pinv(b_c);
    let num = (&bcp * x_tilde).norm();
    let den = (&bcp * (b_uc * u_uc_mean)).norm();
    if den <= f64::EPSILON * num.max(1.0) {
        return Err(Error::InvisibleDrift);
    }
    if num == 0.0 {
        return Err(Error::ZeroDisplacement);
    }
    Ok(num / den)
}

/// Upper bound on the additive energetic resilience over `‖x̃‖₂ ≤ R` when one
/// actuator is lost.
pub fn resilience_bound_driftless(
    b: &Matrix,
    b_c: &Matrix,
    b_uc: &Matrix,
    t_f: f64,
    radius: f64,
) -> Result<f64> {
    if b_uc.ncols() != 1 {
        return Err(Error::NotSingleActuator(b_uc.ncols()));
    }
    let bp = pinv(b);
    let bcp = pinv(b_c);
    let diff = bcp.tr_mul(&bcp) - bp.tr_mul(&bp);
    let lmax = lambda_max_sym(&diff)?;
    let cross = b_uc.transpose() * bcp.transpose() * &bcp;
    let gain = &bcp * b_uc;
    Ok(radius * radius / t_f * lmax
        + 2.0 * radius * spectral_norm(&cross)
        + t_f * (gain.norm_squared() + 1.0))
}

/// All driftless energies of a task at once, for a given uncontrolled mean.
pub fn energies(
    b: &Matrix,
    b_c: &Matrix,
    b_uc: &Matrix,
    x_tilde: &Vector,
    t_f: f64,
    u_uc_mean: &Vector,
) -> Result<DriftlessEnergies> {
    let nominal = nominal_energy_driftless(b, x_tilde, t_f);
    let e_malf = malfunctioning_energy_driftless(b_c, b_uc, x_tilde, t_f, u_uc_mean)?;
    let bound = worst_case_total_bound_driftless(b_c, b_uc, x_tilde, t_f)?;
    let exact = (b_uc.ncols() == 1)
        .then(|| worst_case_total_exact_1act(b_c, b_uc, x_tilde, t_f))
        .transpose()?;
    Ok(DriftlessEnergies {
        e_nominal: nominal.energy,
        e_malf,
        e_worst_total_bound: bound,
        e_worst_total_exact_1act: exact.map(|w| w.energy),
        worst_uuc_sign: exact.map(|w| w.sign),
        degenerate: exact.is_some_and(|w| w.degenerate),
        feasible: nominal.feasible,
    })
}
