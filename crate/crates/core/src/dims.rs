use crate::error::{Error, Result};

/// Hilbert space dimensions `(m, n)` of the two subsystems, with `1 <= m <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SystemDims {
    m: usize,
    n: usize,
}

impl SystemDims {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m < 1 || n < m {
            return Err(Error::Dimension { m, n });
        }
        Ok(SystemDims { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mn(&self) -> usize {
        self.m * self.n
    }

    /// All dims with `1 <= m <= n <= n_max`, ordered by `(m, n)`.
    pub fn grid(n_max: usize) -> impl Iterator<Item = SystemDims> {
        (1..=n_max).flat_map(move |m| (m..=n_max).map(move |n| SystemDims { m, n }))
    }
}

impl std::fmt::Display for SystemDims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_dims() {
        assert!(SystemDims::new(0, 3).is_err());
        assert!(SystemDims::new(4, 3).is_err());
        assert!(SystemDims::new(3, 3).is_ok());
    }

    #[test]
    fn grid_enumerates_upper_triangle() {
        let g: Vec<_> = SystemDims::grid(3).map(|d| (d.m(), d.n())).collect();
        assert_eq!(g, vec![(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]);
    }
}
