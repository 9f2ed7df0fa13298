use std::collections::BTreeMap;

use nalgebra::DMatrix;

use super::{coupling_paths, CouplingPath, SpinLabel};
use crate::error::{Error, Result};
use crate::linalg::{Ket, Operator, C64};

/// Largest qubit count for the dense transform (4096 × 4096).
pub const MAX_DENSE_QUBITS: usize = 12;

/// One `ℍ_{jR} ⊗ ℍ_{jP}` block of the decomposition.
#[derive(Clone, Debug)]
pub struct Sector {
    pub spin: SpinLabel,
    /// `c_j`, the permutation-factor dimension.
    pub multiplicity: usize,
    /// First Schur-coordinate index of the sector.
    pub offset: usize,
    /// Coupling paths labelling the permutation factor, in rank order.
    pub paths: Vec<CouplingPath>,
}

impl Sector {
    /// `2j + 1`.
    pub fn rotation_dim(&self) -> usize {
        self.spin.dim()
    }

    pub fn size(&self) -> usize {
        self.rotation_dim() * self.multiplicity
    }

    /// Schur-coordinate index of `|j, m, r⟩`, with `m_index = m + j`.
    pub fn index(&self, r: usize, m_index: usize) -> usize {
        self.offset + r * self.rotation_dim() + m_index
    }
}

/// The Schur transform of `n` qubits with its sector bookkeeping.
#[derive(Clone, Debug)]
pub struct SchurBasis {
    n: usize,
    sectors: Vec<Sector>,
    /// Columns are coupled states in the computational basis.
    transform: Operator,
    /// Sector position of each Schur-coordinate index.
    sector_of: Vec<usize>,
}

/// Builds the coupled basis by adding spin-½ particles one at a time.
///
/// The qubit computational state `|0⟩` is spin up (`m = +½`), and each new qubit
/// is the right-most (fastest-varying) tensor factor.
pub fn schur_transform(n: usize) -> Result<SchurBasis> {
    if n == 0 {
        return Err(Error::Empty("qubit count"));
    }
    if n > MAX_DENSE_QUBITS {
        return Err(Error::TooLarge(format!(
            "dense Schur transform limited to {MAX_DENSE_QUBITS} qubits, got {n}"
        )));
    }
    let dim = 1usize << n;
    let mut grouped: BTreeMap<SpinLabel, Vec<CouplingPath>> = BTreeMap::new();
    for path in coupling_paths(n) {
        grouped.entry(path.terminal()).or_default().push(path);
    }
    let mut transform = DMatrix::<C64>::zeros(dim, dim);
    let mut sectors = Vec::with_capacity(grouped.len());
    let mut sector_of = Vec::with_capacity(dim);
    let mut offset = 0;
    for (spin, paths) in grouped {
        let sector = Sector {
            spin,
            multiplicity: paths.len(),
            offset,
            paths,
        };
        for (r, path) in sector.paths.iter().enumerate() {
            let states = coupled_states(path);
            for (m_index, state) in states.into_iter().enumerate() {
                let col = sector.index(r, m_index);
                for (row, &amp) in state.iter().enumerate() {
                    transform[(row, col)] = C64::from(amp);
                }
            }
        }
        sector_of.extend(std::iter::repeat_n(sectors.len(), sector.size()));
        offset += sector.size();
        sectors.push(sector);
    }
    debug_assert_eq!(offset, dim);
    Ok(SchurBasis {
        n,
        sectors,
        transform: Operator::from_matrix_unchecked(transform),
        sector_of,
    })
}

/// The `2j+1` coupled states `|j, m⟩` along `path`, `m` ascending, as real
/// vectors on `2^len` amplitudes.
fn coupled_states(path: &CouplingPath) -> Vec<Vec<f64>> {
    // spin ½: m = −½ is |1⟩, m = +½ is |0⟩
    let mut states: Vec<Vec<f64>> = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
    let mut two_j = 1usize;
    for next in &path.steps()[1..] {
        let two_jn = next.two_j();
        let old_dim = states[0].len();
        let a = two_j as f64;
        let mut new_states = Vec::with_capacity(two_jn + 1);
        for m_index in 0..=two_jn {
            let two_m = 2 * m_index as i64 - two_jn as i64;
            let plus = ((a + two_m as f64 + 1.0) / (2.0 * (a + 1.0))).max(0.0).sqrt();
            let minus = ((a - two_m as f64 + 1.0) / (2.0 * (a + 1.0))).max(0.0).sqrt();
            // Condon-Shortley coefficients ⟨j, m_old; ½, σ | j', m⟩
            let (c_up, c_down) = if two_jn > two_j { (plus, minus) } else { (-minus, plus) };
            let mut v = vec![0.0; 2 * old_dim];
            // σ = +½ (new qubit |0⟩) pairs with m_old = m − ½
            if let Some(old) = old_index(two_m - 1, two_j) {
                for (x, &amp) in states[old].iter().enumerate() {
                    v[2 * x] += c_up * amp;
                }
            }
            // σ = −½ (new qubit |1⟩) pairs with m_old = m + ½
            if let Some(old) = old_index(two_m + 1, two_j) {
                for (x, &amp) in states[old].iter().enumerate() {
                    v[2 * x + 1] += c_down * amp;
                }
            }
            new_states.push(v);
        }
        states = new_states;
        two_j = two_jn;
    }
    states
}

fn old_index(two_m: i64, two_j: usize) -> Option<usize> {
    let idx = two_m + two_j as i64;
    (idx >= 0 && idx % 2 == 0 && idx / 2 <= two_j as i64).then_some((idx / 2) as usize)
}

impl SchurBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn sector(&self, spin: SpinLabel) -> Option<&Sector> {
        self.sectors.iter().find(|s| s.spin == spin)
    }

    /// Position in [`Self::sectors`] of the sector owning a Schur index.
    pub fn sector_position(&self, index: usize) -> usize {
        self.sector_of[index]
    }

    pub fn transform(&self) -> &Operator {
        &self.transform
    }

    /// The coupled state `|j, m, r⟩` in the computational basis.
    pub fn coupled_state(&self, spin: SpinLabel, r: usize, m_index: usize) -> Option<Ket> {
        let sector = self.sector(spin)?;
        if r >= sector.multiplicity || m_index >= sector.rotation_dim() {
            return None;
        }
        let col = self.transform.matrix().column(sector.index(r, m_index)).into_owned();
        Some(Ket::from_vector_unchecked(col))
    }

    /// `U† X U`: computational to Schur coordinates.
    pub fn to_schur(&self, x: &DMatrix<C64>) -> DMatrix<C64> {
        let u = self.transform.matrix();
        u.adjoint() * x * u
    }

    /// `U Y U†`: Schur to computational coordinates.
    pub fn from_schur(&self, y: &DMatrix<C64>) -> DMatrix<C64> {
        let u = self.transform.matrix();
        u * y * u.adjoint()
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.transform.unitarity_residual()
    }

    /// For an operator that should act as `A ⊗ I_{2j+1}` on each sector
    /// (r-major ordering), returns `(leakage, structure)`: the largest entry
    /// outside the sector blocks, and the largest deviation inside a block from
    /// `δ_{m m'} A_{r r'}` with `A` read off the `m = 0` diagonal.
    pub fn permutation_block_residuals(&self, x: &Operator) -> Result<(f64, f64)> {
        x.check_dim(self.dim())?;
        let y = self.to_schur(x.matrix());
        let mut leakage: f64 = 0.0;
        for i in 0..self.dim() {
            for k in 0..self.dim() {
                if self.sector_of[i] != self.sector_of[k] {
                    leakage = leakage.max(y[(i, k)].norm());
                }
            }
        }
        let mut structure: f64 = 0.0;
        for s in &self.sectors {
            let d = s.rotation_dim();
            for r in 0..s.multiplicity {
                for rp in 0..s.multiplicity {
                    let a = y[(s.index(r, 0), s.index(rp, 0))];
                    for m in 0..d {
                        for mp in 0..d {
                            let expected = if m == mp { a } else { C64::from(0.0) };
                            structure = structure.max((y[(s.index(r, m), s.index(rp, mp))] - expected).norm());
                        }
                    }
                }
            }
        }
        Ok((leakage, structure))
    }

    /// Largest entry of `U†XU` connecting different sectors.
    pub fn inter_sector_residual(&self, y_schur: &DMatrix<C64>) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim() {
            for k in 0..self.dim() {
                if self.sector_of[i] != self.sector_of[k] {
                    worst = worst.max(y_schur[(i, k)].norm());
                }
            }
        }
        worst
    }

    pub(crate) fn check_same(&self, other_n: usize) -> Result<()> {
        if self.n != other_n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other_n,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::sn_permutation_rep;
    use crate::schur::collective_spin;

    #[test]
    fn two_qubit_columns() {
        let b = schur_transform(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = b.coupled_state(SpinLabel::from_two_j(0), 0, 0).unwrap();
        let expected = Ket::from_real(&[0.0, s, -s, 0.0]).unwrap();
        assert!(singlet.max_abs_diff(&expected) < 1e-15);
        // triplet m = −1, 0, +1
        let t = SpinLabel::from_two_j(2);
        assert!(b.coupled_state(t, 0, 0).unwrap().max_abs_diff(&Ket::basis(4, 3)) < 1e-15);
        assert!(b
            .coupled_state(t, 0, 1)
            .unwrap()
            .max_abs_diff(&Ket::from_real(&[0.0, s, s, 0.0]).unwrap())
            < 1e-15);
        assert!(b.coupled_state(t, 0, 2).unwrap().max_abs_diff(&Ket::basis(4, 0)) < 1e-15);
    }

    #[test]
    fn swap_in_schur_coordinates() {
        let b = schur_transform(2).unwrap();
        let swap = sn_permutation_rep(2, 2).unwrap().element(1);
        let y = b.to_schur(swap.matrix());
        let expected = Operator::diagonal(&[-1.0, 1.0, 1.0, 1.0]);
        assert!(crate::linalg::max_abs_diff(&y, expected.matrix()) < 1e-15);
    }

    #[test]
    fn unitarity_and_block_structure() {
        for n in 1..=5 {
            let b = schur_transform(n).unwrap();
            assert!(b.unitarity_residual() <= 1e-12, "n={n}");
            let rep = sn_permutation_rep(n, 2).unwrap();
            for p in rep.elements() {
                let (leak, structure) = b.permutation_block_residuals(&p).unwrap();
                assert!(leak <= 1e-10 && structure <= 1e-10, "n={n}: {leak} {structure}");
            }
        }
    }

    #[test]
    fn columns_are_spin_eigenstates() {
        // J² |j m r⟩ = j(j+1)|j m r⟩ and J_z |j m r⟩ = m|j m r⟩
        let n = 4;
        let b = schur_transform(n).unwrap();
        let [jx, jy, jz] = collective_spin(n);
        let j2 = &(&(&jx * &jx) + &(&jy * &jy)) + &(&jz * &jz);
        for s in b.sectors() {
            let j = s.spin.j();
            for r in 0..s.multiplicity {
                for mi in 0..s.rotation_dim() {
                    let v = b.coupled_state(s.spin, r, mi).unwrap();
                    let m = mi as f64 - j;
                    let a = v.amplitudes();
                    let j2v = j2.matrix() * a;
                    let jzv = jz.matrix() * a;
                    let err2 = (j2v - a * C64::from(j * (j + 1.0))).norm();
                    let errz = (jzv - a * C64::from(m)).norm();
                    assert!(err2 < 1e-12 && errz < 1e-12);
                }
            }
        }
    }

    #[test]
    fn larger_transforms_are_unitary() {
        for n in 6..=8 {
            assert!(schur_transform(n).unwrap().unitarity_residual() <= 1e-12);
        }
    }

    #[test]
    fn size_limits() {
        assert!(schur_transform(0).is_err());
        assert!(matches!(schur_transform(13), Err(Error::TooLarge(_))));
    }

    #[test]
    fn sector_layout() {
        let b = schur_transform(4).unwrap();
        let layout: Vec<_> = b
            .sectors()
            .iter()
            .map(|s| (s.spin.two_j(), s.multiplicity, s.offset))
            .collect();
        assert_eq!(layout, vec![(0, 2, 0), (2, 3, 2), (4, 1, 11)]);
    }
}
