use nalgebra::{DMatrix, DVector};

use super::{DensityOperator, Ket, Operator, C64};
use crate::error::{Error, Result};

/// Dimensions of the tensor factors of a composite space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsystemShape {
    dims: Vec<usize>,
}

impl SubsystemShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidShape("no factors".into()));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidShape(format!("zero-dimensional factor in {dims:?}")));
        }
        Ok(Self { dims })
    }

    /// `n` factors of dimension `local_dim`.
    pub fn uniform(n: usize, local_dim: usize) -> Result<Self> {
        Self::new(vec![local_dim; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub(crate) fn check_total(&self, dim: usize) -> Result<()> {
        if self.total() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: self.total(),
            });
        }
        Ok(())
    }

    /// Shape after reordering so that factor `i` is the old factor `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        self.check_perm(perm)?;
        Ok(Self {
            dims: perm.iter().map(|&p| self.dims[p]).collect(),
        })
    }

    fn check_perm(&self, perm: &[usize]) -> Result<()> {
        if perm.len() != self.dims.len() {
            return Err(Error::InvalidPermutation(format!(
                "length {} for {} factors",
                perm.len(),
                self.dims.len()
            )));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || seen[p] {
                return Err(Error::InvalidPermutation(format!("{perm:?} is not a bijection")));
            }
            seen[p] = true;
        }
        Ok(())
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }

    /// For each output index of the permuted space, the input index it reads.
    pub(crate) fn permutation_index_map(&self, perm: &[usize]) -> Result<Vec<usize>> {
        self.check_perm(perm)?;
        let in_strides = self.strides();
        let out_dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let total = self.total();
        let mut map = Vec::with_capacity(total);
        let mut digits = vec![0usize; out_dims.len()];
        for _ in 0..total {
            map.push(
                digits
                    .iter()
                    .zip(perm)
                    .map(|(&d, &p)| d * in_strides[p])
                    .sum(),
            );
            // odometer increment, last factor fastest
            for k in (0..digits.len()).rev() {
                digits[k] += 1;
                if digits[k] < out_dims[k] {
                    break;
                }
                digits[k] = 0;
            }
        }
        Ok(map)
    }
}

/// Reorders tensor factors: factor `i` of the output is factor `perm[i]` of the input.
pub trait SubsystemPermute: Sized {
    fn permute_subsystems(&self, shape: &SubsystemShape, perm: &[usize]) -> Result<Self>;
}

impl SubsystemPermute for Ket {
    fn permute_subsystems(&self, shape: &SubsystemShape, perm: &[usize]) -> Result<Self> {
        shape.check_total(self.dim())?;
        let map = shape.permutation_index_map(perm)?;
        let a = self.amplitudes();
        Ok(Ket::from_vector_unchecked(DVector::from_iterator(
            map.len(),
            map.iter().map(|&k| a[k]),
        )))
    }
}

impl SubsystemPermute for Operator {
    fn permute_subsystems(&self, shape: &SubsystemShape, perm: &[usize]) -> Result<Self> {
        shape.check_total(self.dim())?;
        let map = shape.permutation_index_map(perm)?;
        let m = self.matrix();
        Ok(Operator::from_fn(map.len(), |i, j| m[(map[i], map[j])]))
    }
}

impl SubsystemPermute for DensityOperator {
    fn permute_subsystems(&self, shape: &SubsystemShape, perm: &[usize]) -> Result<Self> {
        let op = self.as_operator().permute_subsystems(shape, perm)?;
        Ok(DensityOperator::from_operator_unchecked(op))
    }
}

/// Reduced density operator on the factors in `keep` (output in ascending factor order).
pub fn partial_trace(rho: &DensityOperator, shape: &SubsystemShape, keep: &[usize]) -> Result<DensityOperator> {
    let op = partial_trace_operator(rho.as_operator(), shape, keep)?;
    Ok(DensityOperator::from_operator_unchecked(op))
}

/// Partial trace of an arbitrary operator.
pub fn partial_trace_operator(x: &Operator, shape: &SubsystemShape, keep: &[usize]) -> Result<Operator> {
    shape.check_total(x.dim())?;
    if keep.is_empty() {
        return Err(Error::Empty("partial trace keep set"));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() || *kept.last().unwrap() >= shape.len() {
        return Err(Error::InvalidShape(format!(
            "keep set {keep:?} invalid for {} factors",
            shape.len()
        )));
    }
    let traced: Vec<usize> = (0..shape.len()).filter(|k| !kept.contains(k)).collect();
    let perm: Vec<usize> = kept.iter().chain(traced.iter()).copied().collect();
    // full-space index for (kept, traced) in blocked order
    let map = shape.permutation_index_map(&perm)?;
    let dk: usize = kept.iter().map(|&k| shape.dims()[k]).product();
    let dt = x.dim() / dk;
    let m = x.matrix();
    let out = DMatrix::from_fn(dk, dk, |a, b| {
        (0..dt).fold(C64::from(0.0), |acc, t| acc + m[(map[a * dt + t], map[b * dt + t])])
    });
    Ok(Operator::from_matrix_unchecked(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{tensor, Tensor};
    use crate::random::random_density;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn phi_plus() -> Ket {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Ket::from_real(&[s, 0.0, 0.0, s]).unwrap()
    }

    #[test]
    fn swap_two_qubits() {
        let shape = SubsystemShape::uniform(2, 2).unwrap();
        let out = Ket::basis(4, 0b01).permute_subsystems(&shape, &[1, 0]).unwrap();
        assert_eq!(out, Ket::basis(4, 0b10));
    }

    #[test]
    fn identity_permutation() {
        let shape = SubsystemShape::new(vec![2, 3, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = crate::random::random_ket(12, &mut rng);
        assert_eq!(psi.permute_subsystems(&shape, &[0, 1, 2]).unwrap(), psi);
    }

    #[test]
    fn interleaved_to_blocked_bell_pairs() {
        let psi = tensor(&phi_plus(), &phi_plus());
        let shape = SubsystemShape::uniform(4, 2).unwrap();
        let blocked = psi.permute_subsystems(&shape, &[0, 2, 1, 3]).unwrap();
        // Oracle: amplitude 1/2 exactly where Alice bits (a1 a2) equal Bob bits (b1 b2).
        for idx in 0..16 {
            let (alice, bob) = (idx >> 2, idx & 3);
            let expected = if alice == bob { 0.5 } else { 0.0 };
            assert!((blocked.get(idx).re - expected).abs() < 1e-15, "index {idx:04b}");
            assert_eq!(blocked.get(idx).im, 0.0);
        }
    }

    #[test]
    fn bad_permutations() {
        let shape = SubsystemShape::uniform(2, 2).unwrap();
        let psi = Ket::basis(4, 0);
        assert!(psi.permute_subsystems(&shape, &[0, 0]).is_err());
        assert!(psi.permute_subsystems(&shape, &[0]).is_err());
        let wrong = SubsystemShape::uniform(3, 2).unwrap();
        assert!(psi.permute_subsystems(&wrong, &[0, 1, 2]).is_err());
    }

    #[test]
    fn bell_reduction_is_maximally_mixed() {
        let shape = SubsystemShape::uniform(2, 2).unwrap();
        let out = partial_trace(&phi_plus().projector(), &shape, &[0]).unwrap();
        assert!(out.max_abs_diff(&DensityOperator::maximally_mixed(2)) < 1e-15);
    }

    #[test]
    fn trace_all_but_one_of_product_basis_state() {
        let shape = SubsystemShape::uniform(3, 2).unwrap();
        let rho = Ket::basis(8, 0).projector();
        for keep in 0..3 {
            let out = partial_trace(&rho, &shape, &[keep]).unwrap();
            assert_eq!(out.as_operator(), Ket::basis(2, 0).projector().as_operator());
        }
    }

    #[test]
    fn partial_trace_of_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (a, b) = (random_density(2, &mut rng), random_density(3, &mut rng));
        let shape = SubsystemShape::new(vec![2, 3]).unwrap();
        let ab = a.tensor(&b);
        assert!(partial_trace(&ab, &shape, &[0]).unwrap().max_abs_diff(&a) <= 1e-12);
        assert!(partial_trace(&ab, &shape, &[1]).unwrap().max_abs_diff(&b) <= 1e-12);
        assert!(partial_trace(&ab, &shape, &[]).is_err());
        assert!(partial_trace(&ab, &shape, &[2]).is_err());
    }

    #[test]
    fn partial_trace_keeps_ascending_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (a, b, c) = (
            random_density(2, &mut rng),
            random_density(3, &mut rng),
            random_density(2, &mut rng),
        );
        let shape = SubsystemShape::new(vec![2, 3, 2]).unwrap();
        let abc = a.tensor(&b).tensor(&c);
        let out = partial_trace(&abc, &shape, &[2, 0]).unwrap();
        assert!(out.max_abs_diff(&a.tensor(&c)) < 1e-12);
        assert!((out.trace().re - 1.0).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn permutation_then_inverse_is_exact(
            dims in proptest::collection::vec(1usize..4, 1..5),
            seed in any::<u64>(),
        ) {
            let shape = SubsystemShape::new(dims.clone()).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let psi = crate::random::random_ket(shape.total(), &mut rng);
            let mut perm: Vec<usize> = (0..dims.len()).collect();
            use rand::seq::SliceRandom;
            perm.shuffle(&mut rng);
            let mut inverse = vec![0; perm.len()];
            for (i, &p) in perm.iter().enumerate() {
                inverse[p] = i;
            }
            let moved = psi.permute_subsystems(&shape, &perm).unwrap();
            let back = moved.permute_subsystems(&shape.permuted(&perm).unwrap(), &inverse).unwrap();
            prop_assert_eq!(back, psi);
        }

        #[test]
        fn tensor_is_associative(
            a in proptest::collection::vec(-8i32..8, 8),
            b in proptest::collection::vec(-8i32..8, 18),
            c in proptest::collection::vec(-8i32..8, 8),
        ) {
            // small Gaussian integers multiply exactly in f64
            let op = |v: &[i32], d: usize| {
                let e: Vec<C64> = v.chunks(2).map(|p| C64::new(p[0] as f64, p[1] as f64)).collect();
                Operator::from_row_slice(d, &e).unwrap()
            };
            let (a, b, c) = (op(&a, 2), op(&b, 3), op(&c, 2));
            prop_assert_eq!(a.tensor(&b).tensor(&c), a.tensor(&b.tensor(&c)));
        }

        #[test]
        fn partial_trace_recovers_factor(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_density(3, &mut rng);
            let b = random_density(4, &mut rng);
            let shape = SubsystemShape::new(vec![3, 4]).unwrap();
            let reduced = partial_trace(&a.tensor(&b), &shape, &[0]).unwrap();
            prop_assert!(reduced.max_abs_diff(&a) <= 1e-12);
        }
    }
}
