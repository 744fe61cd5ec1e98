use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numerics::{
    has_full_row_rank, induced_norm, pinv, vec_norm, InducedNorm, Matrix, VecNorm, Vector,
};

/// Residual tolerance for `B B† = I`.
pub const FULL_ROW_RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    Driftless,
    LinearDrift,
    GeneralNonlinear,
}

/// Builtin state-dependent drift families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindTerm {
    /// `(c/2) [sin(p) cos²(p), -sin(2q), 1]` on the roll/pitch/yaw-rate state.
    Admire { amplitude: f64 },
}

impl WindTerm {
    pub fn state_dim(&self) -> usize {
        match self {
            Self::Admire { .. } => 3,
        }
    }

    pub fn eval(&self, x: &Vector) -> Vector {
        match *self {
            Self::Admire { amplitude } => {
                let (p, q) = (x[0], x[1]);
                let half = 0.5 * amplitude;
                Vector::from_vec(vec![
                    half * p.sin() * p.cos().powi(2),
                    -half * (2.0 * q).sin(),
                    half,
                ])
            }
        }
    }

    /// Lipschitz constant in the ∞-norm. The pitch row dominates with `|c|`;
    /// the roll row is bounded by `|c|/2`.
    pub fn lipschitz(&self) -> f64 {
        match *self {
            Self::Admire { amplitude } => amplitude.abs(),
        }
    }
}

/// `ẋ = f(x) + g(x) u` with `f(x) = A x + w(x)` and a constant input map.
#[derive(Debug, Clone)]
pub struct ControlSystem {
    kind: SystemKind,
    drift_matrix: Option<Matrix>,
    wind: Option<WindTerm>,
    input_matrix: Matrix,
    /// Declared ∞-norm Lipschitz constant of the drift.
    pub lipschitz_f: f64,
    /// Declared ∞-norm Lipschitz constant of the input map.
    pub lipschitz_g: f64,
}

impl ControlSystem {
    pub fn driftless(b: Matrix) -> Self {
        Self {
            kind: SystemKind::Driftless,
            drift_matrix: None,
            wind: None,
            input_matrix: b,
            lipschitz_f: 0.0,
            lipschitz_g: 0.0,
        }
    }

    /// Lipschitz constant defaults to `‖A‖∞`.
    pub fn linear(a: Matrix, b: Matrix) -> Result<Self> {
        check_square(&a, b.nrows())?;
        Ok(Self {
            kind: SystemKind::LinearDrift,
            lipschitz_f: induced_norm(&a, InducedNorm::Inf),
            drift_matrix: Some(a),
            wind: None,
            input_matrix: b,
            lipschitz_g: 0.0,
        })
    }

    /// Lipschitz constant defaults to `‖A‖∞ + L_w`.
    pub fn nonlinear(a: Option<Matrix>, wind: WindTerm, b: Matrix) -> Result<Self> {
        if let Some(a) = &a {
            check_square(a, b.nrows())?;
        }
        if wind.state_dim() != b.nrows() {
            return Err(Error::Dimension(format!(
                "wind term acts on {} states, system has {}",
                wind.state_dim(),
                b.nrows()
            )));
        }
        let a_norm = a
            .as_ref()
            .map_or(0.0, |a| induced_norm(a, InducedNorm::Inf));
        Ok(Self {
            kind: SystemKind::GeneralNonlinear,
            drift_matrix: a,
            wind: Some(wind),
            input_matrix: b,
            lipschitz_f: a_norm + wind.lipschitz(),
            lipschitz_g: 0.0,
        })
    }

    /// Overrides the declared Lipschitz constants without checking them.
    pub fn with_lipschitz(mut self, d_f: f64, d_g: f64) -> Self {
        self.lipschitz_f = d_f;
        self.lipschitz_g = d_g;
        self
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn drift_matrix(&self) -> Option<&Matrix> {
        self.drift_matrix.as_ref()
    }

    pub fn wind(&self) -> Option<WindTerm> {
        self.wind
    }

    pub fn state_dim(&self) -> usize {
        self.input_matrix.nrows()
    }

    pub fn input_dim(&self) -> usize {
        self.input_matrix.ncols()
    }

    /// `f(x)`.
    pub fn drift(&self, x: &Vector) -> Vector {
        let mut out = match &self.drift_matrix {
            Some(a) => a * x,
            None => Vector::zeros(x.len()),
        };
        if let Some(w) = &self.wind {
            out += w.eval(x);
        }
        out
    }

    /// `g(x)`.
    pub fn input_map(&self, _x: &Vector) -> Matrix {
        self.input_matrix.clone()
    }

    /// `f(x) + g(x) u`.
    pub fn rhs(&self, x: &Vector, u: &Vector) -> Vector {
        self.drift(x) + &self.input_matrix * u
    }

    /// `D_f + D_g`.
    pub fn lipschitz_sum(&self) -> f64 {
        self.lipschitz_f + self.lipschitz_g
    }

    /// Checks the declared constants and the structural constraints of the kind.
    pub fn validate(&self) -> Result<()> {
        if !(self.lipschitz_f >= 0.0 && self.lipschitz_g >= 0.0) {
            return Err(Error::Validation(
                "Lipschitz constants must be non-negative".into(),
            ));
        }
        if self.kind == SystemKind::Driftless
            && (self.lipschitz_f != 0.0 || self.lipschitz_g != 0.0)
        {
            return Err(Error::Validation(
                "driftless systems require D_f = D_g = 0".into(),
            ));
        }
        if self.input_matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation(
                "input matrix has non-finite entries".into(),
            ));
        }
        Ok(())
    }

    /// Spot-checks the declared Lipschitz constants on `samples` random pairs
    /// drawn uniformly from the box `center ± half_width`.
    pub fn check_lipschitz(
        &self,
        center: &Vector,
        half_width: f64,
        samples: usize,
        seed: u64,
    ) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.state_dim();
        let draw = |rng: &mut ChaCha8Rng| {
            Vector::from_iterator(
                n,
                (0..n).map(|i| center[i] + rng.random_range(-half_width..=half_width)),
            )
        };
        for _ in 0..samples {
            let x1 = draw(&mut rng);
            let x2 = draw(&mut rng);
            let dx = vec_norm(&(&x1 - &x2), VecNorm::Inf);
            let df = vec_norm(&(self.drift(&x1) - self.drift(&x2)), VecNorm::Inf);
            let dg = induced_norm(
                &(self.input_map(&x1) - self.input_map(&x2)),
                InducedNorm::Inf,
            );
            if df > self.lipschitz_f * dx * (1.0 + 1e-9) + 1e-12 {
                return Err(Error::Validation(format!(
                    "drift violates declared D_f = {}: ratio {:.6}",
                    self.lipschitz_f,
                    df / dx
                )));
            }
            if dg > self.lipschitz_g * dx * (1.0 + 1e-9) + 1e-12 {
                return Err(Error::Validation(format!(
                    "input map violates declared D_g = {}",
                    self.lipschitz_g
                )));
            }
        }
        Ok(())
    }
}

fn check_square(a: &Matrix, n: usize) -> Result<()> {
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::Dimension(format!(
            "drift matrix is {}x{}, expected {n}x{n}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(())
}

/// Split of `B = g(x0)` into controlled and uncontrolled columns, with cached
/// pseudoinverses.
#[derive(Debug, Clone)]
pub struct ActuatorPartition {
    pub b: Matrix,
    pub b_c: Matrix,
    pub b_uc: Matrix,
    pub b_pinv: Matrix,
    pub b_c_pinv: Matrix,
    /// `f(x0)`.
    pub f0: Vector,
    pub controlled_indices: Vec<usize>,
    pub uncontrolled_indices: Vec<usize>,
}

impl ActuatorPartition {
    pub fn new(system: &ControlSystem, x0: &Vector, uncontrolled: &[usize]) -> Result<Self> {
        let f0 = system.drift(x0);
        Self::from_matrix(system.input_map(x0), f0, uncontrolled)
    }

    pub fn from_matrix(b: Matrix, f0: Vector, uncontrolled: &[usize]) -> Result<Self> {
        let cols = b.ncols();
        let mut seen = vec![false; cols];
        for &j in uncontrolled {
            if j >= cols {
                return Err(Error::Validation(format!(
                    "uncontrolled index {j} out of range for {cols} inputs"
                )));
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::Validation(format!(
                    "uncontrolled index {j} repeated"
                )));
            }
        }
        if uncontrolled.is_empty() {
            return Err(Error::Validation("no uncontrolled inputs given".into()));
        }
        let controlled: Vec<usize> = (0..cols).filter(|&j| !seen[j]).collect();
        if controlled.is_empty() {
            return Err(Error::Validation("no controlled inputs left".into()));
        }
        let b_c = b.select_columns(controlled.iter());
        let b_uc = b.select_columns(uncontrolled.iter());

        if !has_full_row_rank(&b_c, FULL_ROW_RANK_TOL) {
            return Err(Error::Validation(
                "B_c does not have full row rank (rank deficiency)".into(),
            ));
        }
        if !has_full_row_rank(&b, FULL_ROW_RANK_TOL) {
            return Err(Error::Validation("B does not have full row rank".into()));
        }
        Ok(Self {
            b_pinv: pinv(&b),
            b_c_pinv: pinv(&b_c),
            b,
            b_c,
            b_uc,
            f0,
            controlled_indices: controlled,
            uncontrolled_indices: uncontrolled.to_vec(),
        })
    }

    pub fn state_dim(&self) -> usize {
        self.b.nrows()
    }

    /// Number of controlled inputs `m`.
    pub fn controlled(&self) -> usize {
        self.b_c.ncols()
    }

    /// Number of uncontrolled inputs `p`.
    pub fn uncontrolled(&self) -> usize {
        self.b_uc.ncols()
    }
}

/// Fixed-time reach task `x(0) = x0`, `x(t_f) = x_tg`.
#[derive(Debug, Clone)]
pub struct ReachTask {
    pub x0: Vector,
    pub x_tg: Vector,
    /// `x0 - x_tg`.
    pub x_tilde: Vector,
    pub t_f: f64,
    pub radius: Option<f64>,
}

impl ReachTask {
    pub fn new(x0: Vector, x_tg: Vector, t_f: f64, radius: Option<f64>) -> Result<Self> {
        if x0.len() != x_tg.len() {
            return Err(Error::Dimension("x0 and x_tg differ in length".into()));
        }
        if !(t_f > 0.0 && t_f.is_finite()) {
            return Err(Error::Validation(format!(
                "t_f must be positive, got {t_f}"
            )));
        }
        let x_tilde = &x0 - &x_tg;
        if let Some(r) = radius {
            if r.is_nan() || r < 0.0 {
                return Err(Error::Validation(format!(
                    "R must be non-negative, got {r}"
                )));
            }
            if x_tilde.norm() > r * (1.0 + 1e-12) + 1e-12 {
                return Err(Error::Validation(format!(
                    "‖x0 - x_tg‖₂ = {} exceeds R = {r}",
                    x_tilde.norm()
                )));
            }
        }
        Ok(Self {
            x0,
            x_tg,
            x_tilde,
            t_f,
            radius,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn robot_b() -> Matrix {
        Matrix::from_row_slice(2, 3, &[2.0, 1.0, 1.0, 0.2, -1.0, 1.0])
    }

    #[test]
    fn partition_splits_columns() {
        let p = ActuatorPartition::from_matrix(robot_b(), Vector::zeros(2), &[2]).unwrap();
        assert_eq!(p.controlled_indices, vec![0, 1]);
        assert_eq!(p.b_uc, Matrix::from_column_slice(2, 1, &[1.0, 1.0]));
        assert_eq!((p.controlled(), p.uncontrolled()), (2, 1));
    }

    #[test]
    fn zero_controlled_block_is_rank_deficient() {
        let b = Matrix::from_row_slice(2, 3, &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        let err = ActuatorPartition::from_matrix(b, Vector::zeros(2), &[2]).unwrap_err();
        assert!(err.to_string().contains("B_c"), "{err}");
    }

    #[test]
    fn partition_rejects_bad_indices() {
        let f0 = Vector::zeros(2);
        assert!(ActuatorPartition::from_matrix(robot_b(), f0.clone(), &[3]).is_err());
        assert!(ActuatorPartition::from_matrix(robot_b(), f0.clone(), &[1, 1]).is_err());
        assert!(ActuatorPartition::from_matrix(robot_b(), f0, &[]).is_err());
    }

    #[test]
    fn task_checks_radius_and_horizon() {
        let x0 = Vector::from_vec(vec![3.0, 4.0]);
        let tg = Vector::zeros(2);
        assert!(ReachTask::new(x0.clone(), tg.clone(), 1.0, Some(5.0)).is_ok());
        assert!(ReachTask::new(x0.clone(), tg.clone(), 1.0, Some(4.9)).is_err());
        assert!(ReachTask::new(x0, tg, 0.0, None).is_err());
    }

    #[test]
    fn wind_lipschitz_holds_on_samples() {
        let b = Matrix::identity(3, 3);
        let sys = ControlSystem::nonlinear(None, WindTerm::Admire { amplitude: 2.0 }, b).unwrap();
        assert_eq!(sys.lipschitz_f, 2.0);
        sys.check_lipschitz(&Vector::zeros(3), 5.0, 2000, 7)
            .unwrap();
        let tight = sys.clone().with_lipschitz(1.5, 0.0);
        assert!(tight
            .check_lipschitz(&Vector::zeros(3), 5.0, 2000, 7)
            .is_err());
    }

    #[test]
    fn driftless_with_nonzero_constants_is_invalid() {
        let sys = ControlSystem::driftless(robot_b()).with_lipschitz(0.1, 0.0);
        assert!(sys.validate().is_err());
    }
}
