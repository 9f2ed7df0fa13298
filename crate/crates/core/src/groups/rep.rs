use std::collections::HashSet;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{tol, Operator, C64};

/// Largest group order for which elements are enumerated explicitly (|S₆|).
pub const MAX_GROUP_ORDER: usize = 720;

/// Largest Hilbert-space dimension for dense representations.
pub const MAX_DENSE_DIM: usize = 4096;

#[derive(Clone, Debug)]
enum Elements {
    Dense(Vec<Operator>),
    /// `T(g)|k⟩ = |map[k]⟩`; materialized on demand.
    BasisPermutation(Vec<Vec<usize>>),
}

/// A finite group given by an explicit list of unitary matrices `T(g)`.
#[derive(Clone, Debug)]
pub struct FiniteGroupRep {
    label: String,
    dim: usize,
    elements: Elements,
    names: Vec<String>,
}

impl FiniteGroupRep {
    /// Validates that every element is unitary and all share one dimension.
    pub fn new(label: impl Into<String>, elements: Vec<Operator>, names: Vec<String>) -> Result<Self> {
        let first = elements.first().ok_or(Error::Empty("group elements"))?;
        let dim = first.dim();
        if names.len() != elements.len() {
            return Err(Error::DimensionMismatch {
                expected: elements.len(),
                got: names.len(),
            });
        }
        if elements.len() > MAX_GROUP_ORDER {
            return Err(Error::TooLarge(format!(
                "group order {} exceeds {MAX_GROUP_ORDER}",
                elements.len()
            )));
        }
        for t in &elements {
            t.check_dim(dim)?;
            let residual = t.unitarity_residual();
            if residual > tol::VALIDATION {
                return Err(Error::NotUnitary { residual });
            }
        }
        Ok(Self {
            label: label.into(),
            dim,
            elements: Elements::Dense(elements),
            names,
        })
    }

    /// A representation by permutation matrices of the computational basis.
    pub fn from_basis_permutations(
        label: impl Into<String>,
        dim: usize,
        maps: Vec<Vec<usize>>,
        names: Vec<String>,
    ) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::Empty("group elements"));
        }
        if names.len() != maps.len() {
            return Err(Error::DimensionMismatch {
                expected: maps.len(),
                got: names.len(),
            });
        }
        if maps.len() > MAX_GROUP_ORDER {
            return Err(Error::TooLarge(format!("group order {} exceeds {MAX_GROUP_ORDER}", maps.len())));
        }
        for map in &maps {
            if map.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: map.len(),
                });
            }
            let mut seen = vec![false; dim];
            for &k in map {
                if k >= dim || seen[k] {
                    return Err(Error::InvalidPermutation("basis map is not a bijection".into()));
                }
                seen[k] = true;
            }
        }
        Ok(Self {
            label: label.into(),
            dim,
            elements: Elements::BasisPermutation(maps),
            names,
        })
    }

    /// The one-element group on `dim` dimensions.
    pub fn trivial(dim: usize) -> Self {
        Self {
            label: "trivial".into(),
            dim,
            elements: Elements::BasisPermutation(vec![(0..dim).collect()]),
            names: vec!["e".into()],
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// `T(g_k)` as a dense matrix.
    pub fn element(&self, k: usize) -> Operator {
        match &self.elements {
            Elements::Dense(ops) => ops[k].clone(),
            Elements::BasisPermutation(maps) => {
                let map = &maps[k];
                let mut m = DMatrix::<C64>::zeros(self.dim, self.dim);
                for (col, &row) in map.iter().enumerate() {
                    m[(row, col)] = C64::from(1.0);
                }
                Operator::from_matrix_unchecked(m)
            }
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Operator> + '_ {
        (0..self.order()).map(|k| self.element(k))
    }

    /// The basis map of element `k`, when the representation is by permutation matrices.
    pub fn basis_map(&self, k: usize) -> Option<&[usize]> {
        match &self.elements {
            Elements::Dense(_) => None,
            Elements::BasisPermutation(maps) => Some(&maps[k]),
        }
    }

    /// `T(g_k) X T(g_k)†`.
    pub fn conjugate(&self, k: usize, x: &DMatrix<C64>) -> DMatrix<C64> {
        match &self.elements {
            Elements::Dense(ops) => {
                let t = ops[k].matrix();
                t * x * t.adjoint()
            }
            Elements::BasisPermutation(maps) => {
                let map = &maps[k];
                let mut out = DMatrix::<C64>::zeros(self.dim, self.dim);
                for (l, &pl) in map.iter().enumerate() {
                    for (kk, &pk) in map.iter().enumerate() {
                        out[(pk, pl)] = x[(kk, l)];
                    }
                }
                out
            }
        }
    }

    /// `T(g) ⊗ I_d` for every element.
    pub fn tensor_identity(&self, d: usize) -> Self {
        self.extend(d, true)
    }

    /// `I_d ⊗ T(g)` for every element.
    pub fn identity_tensor(&self, d: usize) -> Self {
        self.extend(d, false)
    }

    fn extend(&self, d: usize, group_on_left: bool) -> Self {
        let label = if group_on_left {
            format!("{}⊗I{d}", self.label)
        } else {
            format!("I{d}⊗{}", self.label)
        };
        let dim = self.dim * d;
        let elements = match &self.elements {
            Elements::Dense(ops) => {
                let id = DMatrix::<C64>::identity(d, d);
                Elements::Dense(
                    ops.iter()
                        .map(|t| {
                            let m = if group_on_left {
                                t.matrix().kronecker(&id)
                            } else {
                                id.kronecker(t.matrix())
                            };
                            Operator::from_matrix_unchecked(m)
                        })
                        .collect(),
                )
            }
            Elements::BasisPermutation(maps) => Elements::BasisPermutation(
                maps.iter()
                    .map(|map| {
                        (0..dim)
                            .map(|x| {
                                if group_on_left {
                                    map[x / d] * d + x % d
                                } else {
                                    (x / self.dim) * self.dim + map[x % self.dim]
                                }
                            })
                            .collect()
                    })
                    .collect(),
            ),
        };
        Self {
            label,
            dim,
            elements,
            names: self.names.clone(),
        }
    }

    /// Largest distance from a product `T(g)T(h)` to the nearest element.
    /// Zero for an exactly closed permutation representation.
    pub fn closure_residual(&self) -> f64 {
        match &self.elements {
            Elements::BasisPermutation(maps) => {
                let set: HashSet<&Vec<usize>> = maps.iter().collect();
                for g in maps {
                    for h in maps {
                        let gh: Vec<usize> = h.iter().map(|&x| g[x]).collect();
                        if !set.contains(&gh) {
                            return 1.0;
                        }
                    }
                }
                0.0
            }
            Elements::Dense(ops) => {
                let mut worst: f64 = 0.0;
                for g in ops {
                    for h in ops {
                        let gh = Operator::from_matrix_unchecked(g.matrix() * h.matrix());
                        let nearest = ops
                            .iter()
                            .map(|k| k.max_abs_diff(&gh))
                            .fold(f64::INFINITY, f64::min);
                        worst = worst.max(nearest);
                    }
                }
                worst
            }
        }
    }

    pub fn check_closure(&self, tol: f64) -> Result<()> {
        let residual = self.closure_residual();
        if residual > tol {
            return Err(Error::NotClosed { residual });
        }
        Ok(())
    }
}

/// All permutations of `0..n` in lexicographic one-line order.
pub fn permutations_lex(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    // standard next-permutation
    while let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) {
        let pivot = i - 1;
        let j = (i..n).rev().find(|&j| current[j] > current[pivot]).unwrap();
        current.swap(pivot, j);
        current[i..].reverse();
        out.push(current.clone());
    }
    out
}

/// The permutation action of S_n on `(ℂ^{local_dim})^{⊗n}`.
///
/// Element `p` (one-line notation) moves tensor factor `i` to position `p[i]`,
/// so that `P(p)P(q) = P(p∘q)`. Elements are listed in lexicographic order.
pub fn sn_permutation_rep(n: usize, local_dim: usize) -> Result<FiniteGroupRep> {
    if n == 0 || local_dim == 0 {
        return Err(Error::InvalidShape(format!("n={n}, local_dim={local_dim}")));
    }
    let dim = (local_dim as u64)
        .checked_pow(n as u32)
        .filter(|&d| d <= MAX_DENSE_DIM as u64)
        .ok_or_else(|| Error::TooLarge(format!("{local_dim}^{n} exceeds {MAX_DENSE_DIM}")))?
        as usize;
    if n > 6 {
        return Err(Error::TooLarge(format!("|S_{n}| exceeds {MAX_GROUP_ORDER}")));
    }
    let perms = permutations_lex(n);
    let mut strides = vec![1usize; n];
    for k in (0..n - 1).rev() {
        strides[k] = strides[k + 1] * local_dim;
    }
    let maps = perms
        .iter()
        .map(|p| {
            (0..dim)
                .map(|x| {
                    (0..n)
                        .map(|i| ((x / strides[i]) % local_dim) * strides[p[i]])
                        .sum()
                })
                .collect()
        })
        .collect();
    let names = perms.iter().map(|p| format!("{p:?}")).collect();
    FiniteGroupRep::from_basis_permutations(format!("S{n}"), dim, maps, names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Ket;

    #[test]
    fn lexicographic_permutations() {
        let p = permutations_lex(3);
        assert_eq!(
            p,
            vec![
                vec![0, 1, 2],
                vec![0, 2, 1],
                vec![1, 0, 2],
                vec![1, 2, 0],
                vec![2, 0, 1],
                vec![2, 1, 0]
            ]
        );
        assert_eq!(permutations_lex(1), vec![vec![0]]);
        assert_eq!(permutations_lex(5).len(), 120);
    }

    #[test]
    fn s1_is_identity() {
        let rep = sn_permutation_rep(1, 2).unwrap();
        assert_eq!(rep.order(), 1);
        assert_eq!(rep.element(0), Operator::identity(2));
    }

    #[test]
    fn s2_swap() {
        let rep = sn_permutation_rep(2, 2).unwrap();
        assert_eq!(rep.order(), 2);
        assert_eq!(rep.element(0), Operator::identity(4));
        let swapped = Ket::basis(4, 0b01).apply(&rep.element(1)).unwrap();
        assert_eq!(swapped, Ket::basis(4, 0b10));
    }

    #[test]
    fn s3_homomorphism_all_pairs() {
        // P(p)P(q) = P(p∘q), (p∘q)(i) = p(q(i))
        let rep = sn_permutation_rep(3, 2).unwrap();
        let perms = permutations_lex(3);
        for (a, p) in perms.iter().enumerate() {
            for (b, q) in perms.iter().enumerate() {
                let pq: Vec<usize> = q.iter().map(|&i| p[i]).collect();
                let c = perms.iter().position(|r| *r == pq).unwrap();
                let prod = &rep.element(a) * &rep.element(b);
                assert_eq!(prod, rep.element(c), "p={p:?} q={q:?}");
            }
        }
        assert_eq!(rep.closure_residual(), 0.0);
    }

    #[test]
    fn moves_factor_i_to_p_of_i() {
        // p = [1,2,0]: factor 0 → position 1, 1 → 2, 2 → 0.  |abc⟩ ↦ |c a b⟩
        let rep = sn_permutation_rep(3, 2).unwrap();
        let k = rep.names().iter().position(|s| s == "[1, 2, 0]").unwrap();
        let out = Ket::basis(8, 0b100).apply(&rep.element(k)).unwrap();
        assert_eq!(out, Ket::basis(8, 0b010));
    }

    #[test]
    fn qutrit_rep_is_unitary_and_closed() {
        let rep = sn_permutation_rep(3, 3).unwrap();
        assert_eq!(rep.dim(), 27);
        for t in rep.elements() {
            assert!(t.unitarity_residual() < 1e-14);
        }
        rep.check_closure(1e-9).unwrap();
    }

    #[test]
    fn oversize_requests_refused() {
        assert!(matches!(sn_permutation_rep(7, 2), Err(Error::TooLarge(_))));
        assert!(matches!(sn_permutation_rep(5, 6), Err(Error::TooLarge(_))));
        assert!(sn_permutation_rep(0, 2).is_err());
    }

    #[test]
    fn dense_rep_rejects_non_unitary() {
        let bad = Operator::diagonal(&[1.0, 2.0]);
        let err = FiniteGroupRep::new("bad", vec![bad], vec!["g".into()]).unwrap_err();
        assert!(matches!(err, Error::NotUnitary { .. }));
    }

    #[test]
    fn dense_closure_detects_missing_element() {
        let z = Operator::pauli_z();
        let x = Operator::pauli_x();
        let open = FiniteGroupRep::new("open", vec![Operator::identity(2), z.clone(), x], vec!["e".into(), "z".into(), "x".into()])
            .unwrap();
        assert!(open.check_closure(1e-9).is_err());
        let closed = FiniteGroupRep::new("Z2", vec![Operator::identity(2), z], vec!["e".into(), "z".into()]).unwrap();
        closed.check_closure(1e-9).unwrap();
    }

    #[test]
    fn extension_matches_kronecker() {
        let rep = sn_permutation_rep(2, 2).unwrap();
        let left = rep.tensor_identity(3);
        let right = rep.identity_tensor(3);
        let id3 = Operator::identity(3);
        use crate::linalg::Tensor;
        for k in 0..rep.order() {
            assert_eq!(left.element(k), rep.element(k).tensor(&id3));
            assert_eq!(right.element(k), id3.tensor(&rep.element(k)));
        }
        let dense = FiniteGroupRep::new("S2", rep.elements().collect(), rep.names().to_vec()).unwrap();
        for k in 0..rep.order() {
            assert_eq!(dense.tensor_identity(3).element(k), left.element(k));
            assert_eq!(dense.identity_tensor(3).element(k), right.element(k));
        }
    }
}
