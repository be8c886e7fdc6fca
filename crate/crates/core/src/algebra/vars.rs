//! The fixed variable layout shared by every polynomial in a computation.
//!
//! Variables are ordered `λ₁..λ_N, λ'₁..λ'_l, ħ, z₁..z_k`; the graded
//! lexicographic order on monomials uses exactly this order.

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarSpace {
    pub n_lambda: usize,
    pub n_lambda_prime: usize,
    pub n_z: usize,
}

impl VarSpace {
    pub fn new(n_lambda: usize, n_lambda_prime: usize, n_z: usize) -> Self {
        VarSpace { n_lambda, n_lambda_prime, n_z }
    }

    pub fn nvars(&self) -> usize {
        self.n_lambda + self.n_lambda_prime + 1 + self.n_z
    }

    pub fn lambda(&self, j: usize) -> usize {
        assert!(j < self.n_lambda);
        j
    }

    pub fn lambda_prime(&self, a: usize) -> usize {
        assert!(a < self.n_lambda_prime);
        self.n_lambda + a
    }

    pub fn hbar(&self) -> usize {
        self.n_lambda + self.n_lambda_prime
    }

    pub fn z(&self, i: usize) -> usize {
        assert!(i < self.n_z);
        self.hbar() + 1 + i
    }

    /// Indices of the equivariant parameters λ and λ'.
    pub fn equivariant_vars(&self) -> std::ops::Range<usize> {
        0..self.hbar()
    }

    pub fn z_vars(&self) -> std::ops::Range<usize> {
        self.hbar() + 1..self.nvars()
    }

    pub fn names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.nvars());
        for j in 0..self.n_lambda {
            names.push(format!("l{}", j + 1));
        }
        for a in 0..self.n_lambda_prime {
            names.push(format!("lp{}", a + 1));
        }
        names.push("h".to_string());
        for i in 0..self.n_z {
            names.push(format!("z{}", i + 1));
        }
        names
    }
}
