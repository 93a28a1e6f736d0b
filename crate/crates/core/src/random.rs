//! Seeded generators for randomized checks. Entries are small integers.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::endo::Endo;
use crate::exterior::{Covector, KForm, MultiIndex, Vector, DIM};
use crate::linalg::Matrix;
use crate::scalar::FieldScalar;

pub const MAX_ENTRY: i64 = 9;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn int(&mut self) -> i64 {
        self.rng.gen_range(-MAX_ENTRY..=MAX_ENTRY)
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn scalar(&mut self) -> FieldScalar {
        FieldScalar::from_int(self.int())
    }

    pub fn nonzero_scalar(&mut self) -> FieldScalar {
        loop {
            let x = self.int();
            if x != 0 {
                return FieldScalar::from_int(x);
            }
        }
    }

    pub fn vector(&mut self) -> Vector {
        Vector(std::array::from_fn(|_| self.scalar()))
    }

    pub fn nonzero_vector(&mut self) -> Vector {
        loop {
            let v = self.vector();
            if !v.is_zero() {
                return v;
            }
        }
    }

    pub fn covector(&mut self) -> Covector {
        Covector(std::array::from_fn(|_| self.scalar()))
    }

    /// Dense random form of the given degree.
    pub fn form(&mut self, degree: usize) -> KForm {
        let mut out = KForm::zero(degree);
        for m in MultiIndex::all_of_len(degree) {
            let x = self.scalar();
            if !x.is_zero() {
                out.add_term(m, x);
            }
        }
        out
    }

    /// Random form with roughly `terms` blades.
    pub fn sparse_form(&mut self, degree: usize, terms: usize) -> KForm {
        let blades = MultiIndex::all_of_len(degree);
        let mut out = KForm::zero(degree);
        for _ in 0..terms {
            let m = blades[self.index(blades.len())];
            out.add_term(m, self.scalar());
        }
        out
    }

    pub fn endo(&mut self) -> Endo {
        let rows = (0..DIM)
            .map(|_| (0..DIM).map(|_| self.scalar()).collect())
            .collect();
        Endo::from_matrix(Matrix::from_rows(rows)).expect("8x8")
    }

    pub fn invertible_endo(&mut self) -> (Endo, Endo) {
        loop {
            let a = self.endo();
            if let Some(inv) = a.inverse() {
                return (a, inv);
            }
        }
    }

    /// `ε ↦ ε(v) α` with `α(v) = 0`, both nonzero.
    pub fn rank_one_nilpotent(&mut self) -> Endo {
        loop {
            let v = self.nonzero_vector();
            let alpha = self.covector();
            let vv = v.dot(&v);
            let av = alpha.eval(&v);
            let flat = v.flat();
            let adjusted = Covector(std::array::from_fn(|i| {
                &(&vv * &alpha.0[i]) - &(&av * &flat.0[i])
            }));
            if adjusted.0.iter().any(|x| !x.is_zero()) {
                return Endo::tensor(&v, &adjusted);
            }
        }
    }

    /// Orthogonal nonzero pair `(v, w)`.
    pub fn orthogonal_pair(&mut self) -> (Vector, Vector) {
        loop {
            let v = self.nonzero_vector();
            let w = self.vector();
            let w = w.scale(&v.dot(&v)).add(&v.scale(&-w.dot(&v)));
            if !w.is_zero() {
                return (v, w);
            }
        }
    }

    /// Linearly independent pair.
    pub fn independent_pair(&mut self) -> (Vector, Vector) {
        loop {
            let u = self.vector();
            let v = self.vector();
            let m = Matrix::from_rows(vec![u.0.to_vec(), v.0.to_vec()]);
            if m.rank() == 2 {
                return (u, v);
            }
        }
    }

    /// Nilpotent of rank at most `max_rank`, conjugated by a random invertible matrix.
    pub fn nilpotent(&mut self, max_rank: usize) -> Endo {
        let mut j = Endo::zero();
        let mut rank = 0;
        let mut start = 0;
        while start < DIM {
            let room = (max_rank - rank).min(DIM - start - 1);
            let block = if room == 0 {
                1
            } else {
                self.int_in(1, room as i64 + 1) as usize
            };
            for k in 0..block - 1 {
                j = j.add(&Endo::elementary(start + k + 1, start + k));
            }
            rank += block - 1;
            start += block;
        }
        let (p, p_inv) = self.invertible_endo();
        p.compose(&j).compose(&p_inv)
    }
}
