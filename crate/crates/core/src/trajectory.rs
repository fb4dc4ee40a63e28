use crate::error::{Error, Result};

/// How a classical path is pinned down.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrajectoryForm {
    InitialValue { x0: f64, v0: f64, t0: f64 },
    BoundaryValue { x0: f64, t0: f64, x1: f64, t1: f64 },
}

/// The unique classical path with `x'' = -g` (potential `+m g x`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trajectory {
    form: TrajectoryForm,
    g: f64,
}

impl Trajectory {
    pub fn initial_value(x0: f64, v0: f64, t0: f64, g: f64) -> Self {
        Self {
            form: TrajectoryForm::InitialValue { x0, v0, t0 },
            g,
        }
    }

    pub fn boundary_value(x0: f64, t0: f64, x1: f64, t1: f64, g: f64) -> Result<Self> {
        if !(t1 > t0) {
            return Err(Error::DegenerateInterval { t0, t1 });
        }
        Ok(Self {
            form: TrajectoryForm::BoundaryValue { x0, t0, x1, t1 },
            g,
        })
    }

    /// Path at rest at `x0` for all time.
    pub fn stationary(x0: f64) -> Self {
        Self::initial_value(x0, 0.0, 0.0, 0.0)
    }

    pub fn form(&self) -> TrajectoryForm {
        self.form
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn start_time(&self) -> f64 {
        match self.form {
            TrajectoryForm::InitialValue { t0, .. } | TrajectoryForm::BoundaryValue { t0, .. } => t0,
        }
    }

    /// Position and velocity at the start time.
    fn initial_state(&self) -> (f64, f64, f64) {
        match self.form {
            TrajectoryForm::InitialValue { x0, v0, t0 } => (x0, v0, t0),
            TrajectoryForm::BoundaryValue { x0, t0, x1, t1 } => {
                let span = t1 - t0;
                (x0, (x1 - x0) / span + 0.5 * self.g * span, t0)
            }
        }
    }

    pub fn position(&self, t: f64) -> f64 {
        if let TrajectoryForm::BoundaryValue { x0, t0, x1, t1 } = self.form {
            // exact at both endpoints
            if t == t0 {
                return x0;
            }
            if t == t1 {
                return x1;
            }
            let s = t - t0;
            let span = t1 - t0;
            return x0 + (x1 - x0) * s / span + 0.5 * self.g * s * (span - s);
        }
        let (x0, v0, t0) = self.initial_state();
        let s = t - t0;
        x0 + v0 * s - 0.5 * self.g * s * s
    }

    pub fn velocity(&self, t: f64) -> f64 {
        let (_, v0, t0) = self.initial_state();
        v0 - self.g * (t - t0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_line_midpoint() {
        let tr = Trajectory::boundary_value(0.0, 0.0, 2.0, 2.0, 0.0).unwrap();
        assert_eq!(tr.position(1.0), 1.0);
    }

    #[test]
    fn falling_bvp() {
        // x(t) = t - t^2/2
        let tr = Trajectory::boundary_value(0.0, 0.0, 0.0, 2.0, 1.0).unwrap();
        assert!((tr.position(1.0) - 0.5).abs() < 1e-15);
        assert!((tr.velocity(0.0) - 1.0).abs() < 1e-15);
        assert!((tr.velocity(2.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn endpoints_exact() {
        let tr = Trajectory::boundary_value(0.3, 0.7, -1.9, 2.3, 9.81).unwrap();
        assert_eq!(tr.position(0.7), 0.3);
        assert_eq!(tr.position(2.3), -1.9);
    }

    #[test]
    fn initial_value_form() {
        let tr = Trajectory::initial_value(1.0, 2.0, 0.5, 3.0);
        assert_eq!(tr.position(0.5), 1.0);
        assert_eq!(tr.velocity(0.5), 2.0);
        assert!((tr.position(1.5) - (1.0 + 2.0 - 1.5)).abs() < 1e-15);
    }

    #[test]
    fn degenerate_interval() {
        assert!(matches!(
            Trajectory::boundary_value(0.0, 1.0, 0.0, 1.0, 1.0),
            Err(Error::DegenerateInterval { .. })
        ));
    }
}
