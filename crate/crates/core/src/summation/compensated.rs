/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another accumulator in, keeping both compensation terms.
    pub fn merge(&mut self, other: &Compensated) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for Compensated {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut c = Compensated::new();
        for v in iter {
            c.add(v);
        }
        c
    }
}

/// Compensated sum of an iterator, in iteration order.
pub fn compensated_sum(iter: impl IntoIterator<Item = f64>) -> f64 {
    iter.into_iter().collect::<Compensated>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_terms() {
        assert_eq!(compensated_sum([1.0, 1e100, 1.0, -1e100]), 2.0);
        let naive: f64 = (0..10).map(|_| 0.1).sum();
        assert_ne!(naive, 1.0);
        assert_eq!(compensated_sum((0..10).map(|_| 0.1)), 1.0);
    }

    #[test]
    fn merge_matches_sequential() {
        let xs: Vec<f64> = (1..2000).map(|i| 1.0 / i as f64).collect();
        let mut a: Compensated = xs[..700].iter().copied().collect();
        let b: Compensated = xs[700..].iter().copied().collect();
        a.merge(&b);
        assert!((a.value() - compensated_sum(xs.iter().copied())).abs() < 1e-15);
    }
}
