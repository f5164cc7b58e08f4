//! Boolean polynomials in algebraic normal form over at most 32 variables.
//!
//! Used as white-box reference functions: the superpoly of a cube is read
//! off symbolically by factoring, independently of any summation.

use std::collections::BTreeSet;

use rand::Rng;

/// A sum of monomials; each monomial is a bit mask of its variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Anf {
    monomials: BTreeSet<u32>,
}

impl Anf {
    pub fn zero() -> Self {
        Anf::default()
    }

    /// Builds a polynomial from monomials given as variable lists; repeated
    /// monomials cancel.
    pub fn from_terms(terms: &[&[usize]]) -> Self {
        let mut p = Anf::zero();
        for t in terms {
            p.add_monomial(t.iter().fold(0u32, |m, &v| m | 1 << v));
        }
        p
    }

    pub fn add_monomial(&mut self, mask: u32) {
        if !self.monomials.remove(&mask) {
            self.monomials.insert(mask);
        }
    }

    pub fn monomials(&self) -> impl Iterator<Item = u32> + '_ {
        self.monomials.iter().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.monomials.iter().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    /// Evaluates at `x`, variable `v` taking bit `v` of `x`.
    pub fn eval(&self, x: u32) -> bool {
        self.monomials.iter().filter(|&&m| x & m == m).count() % 2 == 1
    }

    /// Splits `p = t_I · superpoly + remainder` for the cube mask `cube`;
    /// returns the superpoly.
    pub fn superpoly(&self, cube: u32) -> Anf {
        let mut s = Anf::zero();
        for m in self.monomials.iter().filter(|&&m| m & cube == cube) {
            s.add_monomial(m & !cube);
        }
        s
    }

    /// Random polynomial over `vars` variables with monomials of degree at
    /// most `max_degree`, each included with probability `density`.
    pub fn random<R: Rng>(rng: &mut R, vars: usize, max_degree: u32, density: f64) -> Self {
        assert!(vars <= 32);
        let mut p = Anf::zero();
        for m in 0..(1u64 << vars) {
            let m = m as u32;
            if m.count_ones() <= max_degree && rng.gen_bool(density) {
                p.add_monomial(m);
            }
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_and_eval() {
        let p = Anf::from_terms(&[&[0, 1], &[0, 1], &[2]]);
        assert_eq!(p.monomials().collect::<Vec<_>>(), vec![0b100]);
        assert!(p.eval(0b100));
        assert!(!p.eval(0b011));
        let one = Anf::from_terms(&[&[]]);
        assert!(one.eval(0));
        assert_eq!(one.degree(), 0);
    }

    #[test]
    fn factoring_example() {
        // x1x2x3 + x1x2x3x4 + x2x4x6 + x1x2x3x5x7 over cube {1,2,3}
        let p = Anf::from_terms(&[&[1, 2, 3], &[1, 2, 3, 4], &[2, 4, 6], &[1, 2, 3, 5, 7]]);
        let s = p.superpoly(0b1110);
        assert_eq!(s, Anf::from_terms(&[&[], &[4], &[5, 7]]));
    }
}
