use serde::Serialize;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// A truncated series value with a rigorous bound on the discarded tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncated {
    pub value: f64,
    pub tail_bound: f64,
}

impl Truncated {
    /// The value, provided the tail bound is within `tol`.
    pub fn within(&self, tol: f64) -> crate::Result<f64> {
        if self.tail_bound <= tol {
            Ok(self.value)
        } else {
            Err(crate::Error::TruncationTooSmall {
                tail: self.tail_bound,
                tol,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let acc: Neumaier = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(acc.total(), 2.0);
    }

    #[test]
    fn within_rejects_loose_tail() {
        let t = Truncated {
            value: 1.0,
            tail_bound: 1e-3,
        };
        assert!(t.within(1e-2).is_ok());
        assert!(matches!(
            t.within(1e-6),
            Err(crate::Error::TruncationTooSmall { .. })
        ));
    }
}
