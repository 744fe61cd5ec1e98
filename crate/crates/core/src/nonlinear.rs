//! Approximate energies and resilience bounds for Lipschitz dynamics
//! `ẋ = f(x) + g(x) u`.
//!
//! The nonlinear response is compared against the driftless surrogate
//! `x(t_f) = x0 + t_f B ū - v`. The gap `v` is trajectory dependent; every
//! function here takes it as an argument, and `‖v‖∞ ≤ v̄` from [`v_bound`]
//! is what the bounds rely on. Energies are evaluated at the mean control,
//! which is exact for driftless systems and approximate otherwise.
//!
//! [`Operators`] caches the pseudoinverses and spectral quantities of one
//! actuator split; the free functions build it on the fly.

use crate::driftless::{check_admissible_mean, WorstCase};
use crate::error::{Error, Result};
use crate::model::ActuatorPartition;
use crate::model::{ControlSystem, InputSignal};
use crate::numerics::{
    induced_norm, lambda_max_sym, pinv, sign, spectral_norm, sym_eig, vec_norm, InducedNorm,
    Matrix, VecNorm, Vector,
};
use crate::simulate::integrate;

/// Below this `D_f + D_g` the series limit of `v̄` is used.
pub const SMALL_LIPSCHITZ: f64 = 1e-10;

/// Grönwall bound `‖v‖∞ ≤ v̄` on the response gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VBound {
    pub v_bar: f64,
    /// `‖f0‖∞ + ‖B‖∞`.
    pub c: f64,
    /// `D_f + D_g`.
    pub d_s: f64,
    pub t_f: f64,
}

/// `v̄ = (1/D_S) [c (e^{t_f D_S} - 1) - t_f D_S ‖B‖∞]`.
pub fn v_bound(d_f: f64, d_g: f64, f0_inf_norm: f64, b_inf_norm: f64, t_f: f64) -> VBound {
    let d_s = d_f + d_g;
    let c = f0_inf_norm + b_inf_norm;
    let v_bar = if d_s < SMALL_LIPSCHITZ {
        // c·(t + t²D/2 + t³D²/6) - t‖B‖
        t_f * f0_inf_norm + c * t_f * t_f * d_s * (0.5 + t_f * d_s / 6.0)
    } else {
        (c * (t_f * d_s).exp_m1() - t_f * d_s * b_inf_norm) / d_s
    };
    VBound {
        v_bar: v_bar.max(0.0),
        c,
        d_s,
        t_f,
    }
}

/// `v̄` for one concrete initial state.
pub fn v_bound_at(system: &ControlSystem, x0: &Vector, t_f: f64) -> VBound {
    v_bound(
        system.lipschitz_f,
        system.lipschitz_g,
        vec_norm(&system.drift(x0), VecNorm::Inf),
        induced_norm(&system.input_map(x0), InducedNorm::Inf),
        t_f,
    )
}

/// `v̄` valid for every `x0` with `‖x0 - x_tg‖₂ ≤ R`, using
/// `‖f(x0)‖∞ ≤ ‖f(x_tg)‖∞ + D_f R`.
pub fn v_bound_on_ball(system: &ControlSystem, x_tg: &Vector, radius: f64, t_f: f64) -> VBound {
    let f0 = vec_norm(&system.drift(x_tg), VecNorm::Inf) + system.lipschitz_f * radius;
    v_bound(
        system.lipschitz_f,
        system.lipschitz_g,
        f0,
        induced_norm(&system.input_map(x_tg), InducedNorm::Inf),
        t_f,
    )
}

/// `v = t_f B ū - (x(t_f) - x0)` from a simulated trajectory.
pub fn empirical_v(
    system: &ControlSystem,
    partition: &ActuatorPartition,
    x0: &Vector,
    u: &InputSignal,
    t_f: f64,
    dt: f64,
) -> Result<Vector> {
    if u.dim() != partition.b.ncols() {
        return Err(Error::Dimension(format!(
            "signal has {} channels, system has {} inputs",
            u.dim(),
            partition.b.ncols()
        )));
    }
    u.check_admissible(t_f)?;
    let traj = integrate(system, u, x0, t_f, dt)?;
    Ok(&partition.b * u.mean(t_f) * t_f - (&traj.terminal_state - x0))
}

/// The zero vector followed by the `2ⁿ` vertices of the box `‖v‖∞ ≤ v̄`.
pub fn v_candidates(n: usize, v_bar: f64) -> Vec<Vector> {
    let mut out = vec![Vector::zeros(n)];
    if v_bar > 0.0 {
        out.extend(box_vertices(n, v_bar));
    }
    out
}

/// Vertices of `[-h, h]ⁿ` in binary order, bit `i` set meaning `+h` in
/// coordinate `i`.
pub fn box_vertices(n: usize, half_width: f64) -> Vec<Vector> {
    (0..1usize << n)
        .map(|mask| {
            Vector::from_iterator(
                n,
                (0..n).map(|i| {
                    if mask >> i & 1 == 1 {
                        half_width
                    } else {
                        -half_width
                    }
                }),
            )
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct MeanControl {
    pub value: Vector,
    pub v_used: Vector,
    /// `‖value‖∞ ≤ 1`.
    pub feasible: bool,
}

/// Pseudoinverses and spectral terms of one split `B = [B_c B_uc]`.
#[derive(Debug, Clone)]
pub struct Operators {
    pub b_pinv: Matrix,
    pub b_c_pinv: Matrix,
    pub b_uc: Matrix,
    /// `B_c† B_uc`.
    pub gain: Matrix,
    /// `B_ucᵀ B_c†ᵀ B_c†`.
    pub cross: Matrix,
    /// `Σ λ_i ‖V‖₁²` over the eigendecomposition of `gainᵀ gain`.
    pub spectral: f64,
    /// `λ_max(B_c†ᵀ B_c† - B†ᵀ B†)`.
    pub lambda_max: f64,
    /// Largest singular value of `cross`.
    pub cross_norm: f64,
}

impl Operators {
    pub fn new(b: &Matrix, b_c: &Matrix, b_uc: &Matrix) -> Result<Self> {
        Self::from_pinvs(pinv(b), pinv(b_c), b_uc.clone())
    }

    pub fn from_partition(p: &ActuatorPartition) -> Result<Self> {
        Self::from_pinvs(p.b_pinv.clone(), p.b_c_pinv.clone(), p.b_uc.clone())
    }

    /// For functions given only `B_c` and `B_uc`; the nominal side then uses
    /// `[B_c B_uc]`, a column permutation of `B`.
    fn from_split(b_c: &Matrix, b_uc: &Matrix) -> Result<Self> {
        let mut b = Matrix::zeros(b_c.nrows(), b_c.ncols() + b_uc.ncols());
        b.columns_mut(0, b_c.ncols()).copy_from(b_c);
        b.columns_mut(b_c.ncols(), b_uc.ncols()).copy_from(b_uc);
        Self::new(&b, b_c, b_uc)
    }

    fn from_pinvs(b_pinv: Matrix, b_c_pinv: Matrix, b_uc: Matrix) -> Result<Self> {
        let gain = &b_c_pinv * &b_uc;
        let eig = sym_eig(&gain.tr_mul(&gain))?;
        let v1 = induced_norm(&eig.eigenvectors, InducedNorm::One);
        let spectral = eig.eigenvalues.iter().map(|l| l * v1 * v1).sum();
        let lambda_max = lambda_max_sym(&(b_c_pinv.tr_mul(&b_c_pinv) - b_pinv.tr_mul(&b_pinv)))?;
        let cross = b_uc.transpose() * b_c_pinv.transpose() * &b_c_pinv;
        Ok(Self {
            cross_norm: spectral_norm(&cross),
            b_pinv,
            b_c_pinv,
            b_uc,
            gain,
            cross,
            spectral,
            lambda_max,
        })
    }

    pub fn state_dim(&self) -> usize {
        self.b_uc.nrows()
    }

    pub fn uncontrolled(&self) -> usize {
        self.b_uc.ncols()
    }

    /// `(1/t_f) B† (v - x̃)`.
    pub fn mean_control_nominal(&self, x_tilde: &Vector, t_f: f64, v: &Vector) -> MeanControl {
        let value = &self.b_pinv * (v - x_tilde) / t_f;
        MeanControl {
            feasible: vec_norm(&value, VecNorm::Inf) <= 1.0,
            value,
            v_used: v.clone(),
        }
    }

    /// `(1/t_f) B_c† (v - x̃ - t_f B_uc ū_uc)`.
    pub fn mean_control_malfunctioning(
        &self,
        x_tilde: &Vector,
        t_f: f64,
        v: &Vector,
        u_uc_mean: &Vector,
    ) -> Result<MeanControl> {
        check_admissible_mean(u_uc_mean)?;
        let value = &self.b_c_pinv * (v - x_tilde - &self.b_uc * u_uc_mean * t_f) / t_f;
        Ok(MeanControl {
            feasible: vec_norm(&value, VecNorm::Inf) <= 1.0,
            value,
            v_used: v.clone(),
        })
    }

    /// Nominal mean control stays in the unit box for every `‖v‖∞ ≤ v̄`.
    pub fn feasible_nominal(&self, x_tilde: &Vector, t_f: f64, v_bar: f64) -> bool {
        box_feasible(&self.b_pinv, x_tilde, t_f, v_bar, None)
    }

    /// Controlled mean stays in the unit box for every `‖v‖∞ ≤ v̄` and every
    /// admissible `ū_uc`.
    pub fn feasible_malfunctioning(&self, x_tilde: &Vector, t_f: f64, v_bar: f64) -> bool {
        box_feasible(&self.b_c_pinv, x_tilde, t_f, v_bar, Some(&self.gain))
    }

    /// `(1/t_f) ‖B† (v - x̃)‖₂²`.
    pub fn nominal_energy(&self, x_tilde: &Vector, t_f: f64, v: &Vector) -> f64 {
        (&self.b_pinv * (v - x_tilde)).norm_squared() / t_f
    }

    /// `(1/t_f) ‖B_c† (v - x̃ - t_f B_uc ū_uc)‖₂²`.
    pub fn malfunctioning_energy(
        &self,
        x_tilde: &Vector,
        t_f: f64,
        v: &Vector,
        u_uc_mean: &Vector,
    ) -> Result<f64> {
        check_admissible_mean(u_uc_mean)?;
        let w = v - x_tilde - &self.b_uc * u_uc_mean * t_f;
        Ok((&self.b_c_pinv * w).norm_squared() / t_f)
    }

    /// Upper bound on the worst-case total energy for any `p`.
    pub fn worst_case_total_bound(&self, x_tilde: &Vector, t_f: f64, v: &Vector) -> f64 {
        let w = v - x_tilde;
        let p = self.uncontrolled() as f64;
        (&self.b_c_pinv * &w).norm_squared() / t_f
            + t_f * (self.spectral + p)
            + 2.0 * vec_norm(&(&self.cross * &w), VecNorm::One)
    }

    /// Worst-case total energy for one lost actuator, attained by the constant
    /// uncontrolled input `sign(β)` with `β = B_ucᵀ B_c†ᵀ B_c† (x̃ - v)`.
    pub fn worst_case_total_1act(
        &self,
        x_tilde: &Vector,
        t_f: f64,
        v: &Vector,
    ) -> Result<WorstCase> {
        if self.uncontrolled() != 1 {
            return Err(Error::NotSingleActuator(self.uncontrolled()));
        }
        let d = x_tilde - v;
        let beta = (&self.cross * &d)[0];
        let s = sign(beta);
        Ok(WorstCase {
            energy: (&self.b_c_pinv * &d).norm_squared() / t_f
                + t_f * (self.gain.norm_squared() + 1.0)
                + 2.0 * beta.abs(),
            sign: s,
            degenerate: s == 0.0,
        })
    }

    /// Upper bound on the energetic resilience over `‖x̃‖₂ ≤ R` for any `p`.
    pub fn resilience_bound_general(&self, t_f: f64, radius: f64, v_bar: f64) -> f64 {
        let n = self.state_dim() as f64;
        let reach = radius + v_bar * n.sqrt();
        let p = self.uncontrolled() as f64;
        t_f * (self.spectral + p)
            + reach * reach / t_f * self.lambda_max
            + 2.0 * n * reach * self.cross_norm
    }

    /// Upper bound on the energetic resilience over `‖x̃‖₂ ≤ R` for one lost
    /// actuator.
    pub fn resilience_bound_1act(&self, t_f: f64, radius: f64, v_bar: f64) -> Result<f64> {
        if self.uncontrolled() != 1 {
            return Err(Error::NotSingleActuator(self.uncontrolled()));
        }
        let n = self.state_dim() as f64;
        let reach = radius + v_bar * n.sqrt();
        Ok(reach * reach / t_f * self.lambda_max
            + 2.0 * reach * self.cross_norm
            + t_f * (self.gain.norm_squared() + 1.0))
    }
}

/// Row-wise `|[P x̃]_i| + v̄ ‖row_i(P)‖₁ + t_f ‖row_i(G)‖₁ ≤ t_f`.
fn box_feasible(p: &Matrix, x_tilde: &Vector, t_f: f64, v_bar: f64, gain: Option<&Matrix>) -> bool {
    let z = p * x_tilde;
    (0..p.nrows()).all(|i| {
        let row = p.row(i);
        let mut worst = z[i].abs() + v_bar * row.iter().map(|a| a.abs()).sum::<f64>();
        if let Some(g) = gain {
            worst += t_f * g.row(i).iter().map(|a| a.abs()).sum::<f64>();
        }
        worst <= t_f
    })
}

pub fn mean_control_nominal(b: &Matrix, x_tilde: &Vector, t_f: f64, v: &Vector) -> MeanControl {
    let value = pinv(b) * (v - x_tilde) / t_f;
    MeanControl {
        feasible: vec_norm(&value, VecNorm::Inf) <= 1.0,
        value,
        v_used: v.clone(),
    }
}

pub fn mean_control_malfunctioning(
    b_c: &Matrix,
    b_uc: &Matrix,
    x_tilde: &Vector,
    t_f: f64,
    v: &Vector,
    u_uc_mean: &Vector,
) -> Result<MeanControl> {
    check_admissible_mean(u_uc_mean)?;
    let value = pinv(b_c) * (v - x_tilde - b_uc * u_uc_mean * t_f) / t_f;
    Ok(MeanControl {
        feasible: vec_norm(&value, VecNorm::Inf) <= 1.0,
        value,
        v_used: v.clone(),
    })
}

pub fn feasibility_nominal(b: &Matrix, x_tilde: &Vector, t_f: f64, v_bar: f64) -> bool {
    box_feasible(&pinv(b), x_tilde, t_f, v_bar, None)
}

pub fn feasibility_malfunctioning(
    b_c: &Matrix,
    b_uc: &Matrix,
    x_tilde: &Vector,
    t_f: f64,
    v_bar: f64,
) -> bool {
    let bcp = pinv(b_c);
    let gain = &bcp * b_uc;
    box_feasible(&bcp, x_tilde, t_f, v_bar, Some(&gain))
}

pub fn nominal_energy_approx(b: &Matrix, x_tilde: &Vector, t_f: f64, v: &Vector) -> f64 {
    (pinv(b) * (v - x_tilde)).norm_squared() / t_f
}

pub fn malfunctioning_energy_approx(
    b_c: &Matrix,
    b_uc: &Matrix,
    x_tilde: &Vector,
    t_f: f64,
    v: &Vector,
    u_uc_mean: &Vector,
) -> Result<f64> {
    check_admissible_mean(u_uc_mean)?;
    Ok((pinv(b_c) * (v - x_tilde - b_uc * u_uc_mean * t_f)).norm_squared() / t_f)
}

pub fn worst_case_total_bound(
    b_c: &Matrix,
    b_uc: &Matrix,
    x_tilde: &Vector,
    t_f: f64,
    v: &Vector,
) -> Result<f64> {
    Ok(Operators::from_split(b_c, b_uc)?.worst_case_total_bound(x_tilde, t_f, v))
}

pub fn worst_case_total_1act(
    b_c: &Matrix,
    b_uc: &Matrix,
    x_tilde: &Vector,
    t_f: f64,
    v: &Vector,
) -> Result<WorstCase> {
    if b_uc.ncols() != 1 {
        return Err(Error::NotSingleActuator(b_uc.ncols()));
    }
    Operators::from_split(b_c, b_uc)?.worst_case_total_1act(x_tilde, t_f, v)
}

/// `n` enters through `R + v̄√n` and the cross-term factor.
pub fn resilience_bound_general(
    b: &Matrix,
    b_c: &Matrix,
    b_uc: &Matrix,
    t_f: f64,
    radius: f64,
    v_bar: f64,
    n: usize,
) -> Result<f64> {
    check_state_dim(b, n)?;
    Ok(Operators::new(b, b_c, b_uc)?.resilience_bound_general(t_f, radius, v_bar))
}

pub fn resilience_bound_1act(
    b: &Matrix,
    b_c: &Matrix,
    b_uc: &Matrix,
    t_f: f64,
    radius: f64,
    v_bar: f64,
    n: usize,
) -> Result<f64> {
    check_state_dim(b, n)?;
    if b_uc.ncols() != 1 {
        return Err(Error::NotSingleActuator(b_uc.ncols()));
    }
    Operators::new(b, b_c, b_uc)?.resilience_bound_1act(t_f, radius, v_bar)
}

fn check_state_dim(b: &Matrix, n: usize) -> Result<()> {
    if b.nrows() != n {
        return Err(Error::Dimension(format!(
            "n = {n} but B has {} rows",
            b.nrows()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> Vector {
        Vector::from_column_slice(x)
    }

    #[test]
    fn v_bound_driftless_and_limit() {
        assert_eq!(v_bound(0.0, 0.0, 0.0, 3.0, 1.0).v_bar, 0.0);
        let lim = v_bound(0.0, 0.0, 2.0, 3.0, 1.5).v_bar;
        assert!((lim - 3.0).abs() < 1e-15);
        let near = v_bound(1e-6, 0.0, 2.0, 3.0, 1.5).v_bar;
        assert!((near - lim).abs() < 1e-4);
    }

    #[test]
    fn v_bound_branches_agree_at_threshold() {
        let below = v_bound(0.99 * SMALL_LIPSCHITZ, 0.0, 1.0, 2.0, 1.0).v_bar;
        let above = v_bound(1.01 * SMALL_LIPSCHITZ, 0.0, 1.0, 2.0, 1.0).v_bar;
        assert!((below - above).abs() < 1e-9);
    }

    #[test]
    fn nominal_mean_control_trivial() {
        let i2 = Matrix::identity(2, 2);
        let m = mean_control_nominal(&i2, &v(&[1.0, -1.0]), 2.0, &v(&[0.0, 0.0]));
        assert!((m.value - v(&[-0.5, 0.5])).amax() < 1e-15);
        let x = v(&[0.3, 0.7]);
        assert!(mean_control_nominal(&i2, &x, 1.0, &x).value.amax() == 0.0);
    }

    #[test]
    fn malfunctioning_mean_zero_when_uncontrolled_covers_gap() {
        let b_c = Matrix::from_row_slice(2, 2, &[2.0, 1.0, 0.2, -1.0]);
        let b_uc = Matrix::from_column_slice(2, 1, &[1.0, 1.0]);
        let t_f = 3.0;
        let u = v(&[0.4]);
        let x = v(&[0.1, -0.2]);
        let vv = &x + &b_uc * &u * t_f;
        let m = mean_control_malfunctioning(&b_c, &b_uc, &x, t_f, &vv, &u).unwrap();
        assert!(m.value.amax() < 1e-15);
    }

    #[test]
    fn box_vertices_cover_all_signs() {
        let verts = box_vertices(3, 2.0);
        assert_eq!(verts.len(), 8);
        assert!(verts.iter().all(|x| x.amax() == 2.0));
        assert_eq!(v_candidates(3, 0.0).len(), 1);
        assert_eq!(v_candidates(3, 1.0).len(), 9);
    }

    #[test]
    fn feasibility_reduces_to_driftless_check() {
        let b = Matrix::from_row_slice(2, 3, &[2.0, 1.0, 1.0, 0.2, -1.0, 1.0]);
        let x = v(&[1.0, 1.0]);
        let ninf = vec_norm(&(pinv(&b) * &x), VecNorm::Inf);
        assert!(feasibility_nominal(&b, &x, ninf * 1.001, 0.0));
        assert!(!feasibility_nominal(&b, &x, ninf * 0.999, 0.0));
        assert!(!feasibility_nominal(&b, &x, ninf * 0.999, 10.0));
    }

    #[test]
    fn covered_uncontrolled_actuator_makes_malfunction_infeasible() {
        let b_c = Matrix::from_row_slice(1, 1, &[1.0]);
        let b_uc = Matrix::from_row_slice(1, 1, &[2.0]);
        for t_f in [0.1, 1.0, 100.0] {
            assert!(!feasibility_malfunctioning(
                &b_c,
                &b_uc,
                &v(&[0.0]),
                t_f,
                0.0
            ));
        }
    }

    #[test]
    fn single_actuator_forms_reject_multiple() {
        let b_c = Matrix::identity(2, 2);
        let b_uc = Matrix::identity(2, 2);
        let b = Matrix::identity(2, 4);
        let z = v(&[0.0, 0.0]);
        assert!(worst_case_total_1act(&b_c, &b_uc, &z, 1.0, &z).is_err());
        assert!(resilience_bound_1act(&b, &b_c, &b_uc, 1.0, 1.0, 0.0, 2).is_err());
    }

    #[test]
    fn resilience_bound_at_origin_is_uncontrolled_cost() {
        let b = Matrix::from_row_slice(2, 3, &[2.0, 1.0, 1.0, 0.2, -1.0, 1.0]);
        let b_c = b.columns(0, 2).into_owned();
        let b_uc = b.columns(2, 1).into_owned();
        let ops = Operators::new(&b, &b_c, &b_uc).unwrap();
        let r = resilience_bound_general(&b, &b_c, &b_uc, 2.0, 0.0, 0.0, 2).unwrap();
        assert!((r - 2.0 * (ops.spectral + 1.0)).abs() < 1e-12);
    }
}
