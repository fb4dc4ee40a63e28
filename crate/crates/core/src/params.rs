use crate::error::{Error, Result};

/// Physical constants of a run. Natural units by default: `hbar = m = 1`, `c = 10`.
///
/// The Hamiltonian is `H = p^2/(2m) + m g x`, so a positive `g` pulls the
/// packet toward negative `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub hbar: f64,
    pub m: f64,
    pub g: f64,
    /// Only used by the proper-time calculations.
    pub c: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            m: 1.0,
            g: 0.0,
            c: 10.0,
        }
    }
}

impl PhysicalParams {
    pub fn new(hbar: f64, m: f64, g: f64, c: f64) -> Result<Self> {
        let p = Self { hbar, m, g, c };
        p.validate()?;
        Ok(p)
    }

    /// Natural units with the given acceleration.
    pub fn natural(g: f64) -> Self {
        Self {
            g,
            ..Self::default()
        }
    }

    pub fn with_g(self, g: f64) -> Self {
        Self { g, ..self }
    }

    pub fn with_c(self, c: f64) -> Self {
        Self { c, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [("hbar", self.hbar), ("m", self.m), ("c", self.c)];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::BadParams { name, value });
            }
        }
        if !self.g.is_finite() {
            return Err(Error::BadParams {
                name: "g",
                value: self.g,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_constants() {
        assert!(PhysicalParams::new(0.0, 1.0, 1.0, 10.0).is_err());
        assert!(PhysicalParams::new(1.0, -1.0, 1.0, 10.0).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, -3.0, 10.0).is_ok());
    }

    #[test]
    fn natural_units() {
        let p = PhysicalParams::natural(1.0);
        assert_eq!((p.hbar, p.m, p.g, p.c), (1.0, 1.0, 1.0, 10.0));
    }
}
