use nalgebra::DMatrix;

use super::{SchurBasis, SpinLabel};
use crate::error::{Error, Result};
use crate::linalg::{conjugate_local, tol, DensityOperator, Operator, C64};

/// Sectors lighter than this are dropped; their normalized blocks are undefined.
pub const WEIGHT_FLOOR: f64 = 1e-12;

/// The `(j_a, j_b)` block of a twirled bipartite state.
#[derive(Clone, Debug)]
pub struct SectorBlock {
    pub j_a: SpinLabel,
    pub j_b: SpinLabel,
    pub weight: f64,
    /// Normalized state on `ℍ_{j_a R} ⊗ ℍ_{j_b R}`, index `m_a (2j_b+1) + m_b`.
    pub r_block: DensityOperator,
    /// Normalized state on `ℍ_{j_a P} ⊗ ℍ_{j_b P}`, index `r_a c_b + r_b`.
    pub p_block: DensityOperator,
}

/// A bipartite state written as `Σ p · r_block ⊗ p_block` over sector pairs.
#[derive(Clone, Debug)]
pub struct SectorDecomposition {
    pub n: usize,
    pub blocks: Vec<SectorBlock>,
    /// Largest entry between different `(j_a, j_b)` sector pairs.
    pub off_block_residual: f64,
    /// Largest entrywise gap between a sector block and `p · r_block ⊗ p_block`.
    pub product_residual: f64,
    /// `product_residual` within the comparison tolerance.
    pub is_product_form: bool,
}

impl SectorDecomposition {
    pub fn total_weight(&self) -> f64 {
        self.blocks.iter().map(|b| b.weight).sum()
    }

    pub fn block(&self, j_a: SpinLabel, j_b: SpinLabel) -> Option<&SectorBlock> {
        self.blocks.iter().find(|b| b.j_a == j_a && b.j_b == j_b)
    }

    /// `Σ p · (r_block ⊗ p_block)` mapped back to the computational basis.
    pub fn reconstruct(&self, basis: &SchurBasis) -> Result<DensityOperator> {
        basis.check_same(self.n)?;
        let d = basis.dim();
        let mut y = DMatrix::<C64>::zeros(d * d, d * d);
        for block in &self.blocks {
            let (sa, sb) = (
                basis.sector(block.j_a).expect("sector from this basis"),
                basis.sector(block.j_b).expect("sector from this basis"),
            );
            let layout = PairLayout::new(sa, sb, d);
            for (x, (ra, ma, rb, mb)) in layout.indices() {
                for (z, (ra2, ma2, rb2, mb2)) in layout.indices() {
                    let r = block.r_block.get(ma * layout.db + mb, ma2 * layout.db + mb2);
                    let p = block.p_block.get(ra * layout.cb + rb, ra2 * layout.cb + rb2);
                    y[(x, z)] = r * p * block.weight;
                }
            }
        }
        let u = basis.transform().matrix();
        Ok(DensityOperator::from_operator_unchecked(Operator::from_matrix_unchecked(
            conjugate_local(&y, u, u),
        )))
    }
}

/// Index bookkeeping for one `(j_a, j_b)` block in Schur ⊗ Schur coordinates.
struct PairLayout<'a> {
    sa: &'a super::Sector,
    sb: &'a super::Sector,
    full_b: usize,
    da: usize,
    db: usize,
    ca: usize,
    cb: usize,
}

impl<'a> PairLayout<'a> {
    fn new(sa: &'a super::Sector, sb: &'a super::Sector, full_b: usize) -> Self {
        Self {
            sa,
            sb,
            full_b,
            da: sa.rotation_dim(),
            db: sb.rotation_dim(),
            ca: sa.multiplicity,
            cb: sb.multiplicity,
        }
    }

    fn global(&self, ra: usize, ma: usize, rb: usize, mb: usize) -> usize {
        self.sa.index(ra, ma) * self.full_b + self.sb.index(rb, mb)
    }

    /// All `(global index, (r_a, m_a, r_b, m_b))` in the block.
    fn indices(&self) -> impl Iterator<Item = (usize, (usize, usize, usize, usize))> + '_ {
        (0..self.ca).flat_map(move |ra| {
            (0..self.da).flat_map(move |ma| {
                (0..self.cb).flat_map(move |rb| {
                    (0..self.db).map(move |mb| (self.global(ra, ma, rb, mb), (ra, ma, rb, mb)))
                })
            })
        })
    }
}

/// Splits a twirled state on Alice-block ⊗ Bob-block of `n + n` qubits into
/// weighted `(j_a, j_b)` sectors, each factored into rotation and permutation parts.
///
/// Fails with [`Error::NotBlockDiagonal`] when entries between different sector
/// pairs exceed the comparison tolerance. A non-product sector is reported via
/// `is_product_form`, not as an error.
pub fn bipartite_sector_decompose(rho: &DensityOperator, n: usize, basis: &SchurBasis) -> Result<SectorDecomposition> {
    basis.check_same(n)?;
    let d = basis.dim();
    rho.check_dim(d * d)?;
    let u_dag = basis.transform().matrix().adjoint();
    let y = conjugate_local(rho.matrix(), &u_dag, &u_dag);
    decompose_schur(&y, n, basis)
}

pub(crate) fn decompose_schur(y: &DMatrix<C64>, n: usize, basis: &SchurBasis) -> Result<SectorDecomposition> {
    let d = basis.dim();
    let n_sectors = basis.sectors().len();
    let pair_of = |x: usize| basis.sector_position(x / d) * n_sectors + basis.sector_position(x % d);
    let pair_ids: Vec<usize> = (0..d * d).map(pair_of).collect();
    let mut off_block_residual: f64 = 0.0;
    for x in 0..d * d {
        for z in 0..d * d {
            if pair_ids[x] != pair_ids[z] {
                off_block_residual = off_block_residual.max(y[(x, z)].norm());
            }
        }
    }
    if off_block_residual > tol::COMPARISON {
        return Err(Error::NotBlockDiagonal {
            residual: off_block_residual,
        });
    }

    let mut blocks = Vec::new();
    let mut product_residual: f64 = 0.0;
    for sa in basis.sectors() {
        for sb in basis.sectors() {
            let layout = PairLayout::new(sa, sb, d);
            let weight: f64 = layout.indices().map(|(x, _)| y[(x, x)].re).sum();
            if weight <= WEIGHT_FLOOR {
                continue;
            }
            let (da, db, ca, cb) = (layout.da, layout.db, layout.ca, layout.cb);
            let mut r = DMatrix::<C64>::zeros(da * db, da * db);
            let mut p = DMatrix::<C64>::zeros(ca * cb, ca * cb);
            for (x, (ra, ma, rb, mb)) in layout.indices() {
                for (z, (ra2, ma2, rb2, mb2)) in layout.indices() {
                    let v = y[(x, z)];
                    if ra == ra2 && rb == rb2 {
                        r[(ma * db + mb, ma2 * db + mb2)] += v;
                    }
                    if ma == ma2 && mb == mb2 {
                        p[(ra * cb + rb, ra2 * cb + rb2)] += v;
                    }
                }
            }
            r /= C64::from(weight);
            p /= C64::from(weight);
            for (x, (ra, ma, rb, mb)) in layout.indices() {
                for (z, (ra2, ma2, rb2, mb2)) in layout.indices() {
                    let model = r[(ma * db + mb, ma2 * db + mb2)] * p[(ra * cb + rb, ra2 * cb + rb2)] * weight;
                    product_residual = product_residual.max((y[(x, z)] - model).norm());
                }
            }
            blocks.push(SectorBlock {
                j_a: sa.spin,
                j_b: sb.spin,
                weight,
                r_block: DensityOperator::from_operator_unchecked(Operator::from_matrix_unchecked(r)),
                p_block: DensityOperator::from_operator_unchecked(Operator::from_matrix_unchecked(p)),
            });
        }
    }
    Ok(SectorDecomposition {
        n,
        blocks,
        off_block_residual,
        product_residual,
        is_product_form: product_residual <= tol::COMPARISON,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Ket, SubsystemPermute, SubsystemShape, Tensor};
    use crate::random::random_density;
    use crate::schur::{bipartite_sn_twirl_brute, bipartite_twirl_fast, multiplicity, schur_transform, Ssr};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bell_pairs(n: usize) -> Ket {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let pair = Ket::from_real(&[s, 0.0, 0.0, s]).unwrap();
        let interleaved = crate::linalg::tensor_power(&pair, n);
        let perm: Vec<usize> = (0..n).map(|i| 2 * i).chain((0..n).map(|i| 2 * i + 1)).collect();
        interleaved
            .permute_subsystems(&SubsystemShape::uniform(2 * n, 2).unwrap(), &perm)
            .unwrap()
    }

    #[test]
    fn single_pair_has_one_sector() {
        let b = schur_transform(1).unwrap();
        let rho = bipartite_sn_twirl_brute(&bell_pairs(1).projector(), 1).unwrap();
        let dec = bipartite_sector_decompose(&rho, 1, &b).unwrap();
        assert_eq!(dec.blocks.len(), 1);
        let block = &dec.blocks[0];
        assert_eq!((block.j_a, block.j_b), (SpinLabel::HALF, SpinLabel::HALF));
        assert!((block.weight - 1.0).abs() < 1e-12);
        assert!(block.r_block.max_abs_diff(&bell_pairs(1).projector()) < 1e-12);
    }

    #[test]
    fn two_pairs_weights_and_blocks() {
        let b = schur_transform(2).unwrap();
        let rho = bipartite_sn_twirl_brute(&bell_pairs(2).projector(), 2).unwrap();
        let dec = bipartite_sector_decompose(&rho, 2, &b).unwrap();
        assert!(dec.is_product_form);
        assert_eq!(dec.blocks.len(), 2);
        let j0 = SpinLabel::new(2, 0).unwrap();
        let j1 = SpinLabel::new(2, 2).unwrap();
        let s0 = dec.block(j0, j0).unwrap();
        let s1 = dec.block(j1, j1).unwrap();
        assert!((s0.weight - 0.25).abs() < 1e-12);
        assert!((s1.weight - 0.75).abs() < 1e-12);
        assert_eq!(s0.r_block.dim(), 1);
        // |φ₁⟩ = Σ_m |m⟩|m⟩/√3 on 3×3
        let t = 1.0 / 3f64.sqrt();
        let mut amps = vec![0.0; 9];
        for m in 0..3 {
            amps[4 * m] = t;
        }
        let phi1 = Ket::from_real(&amps).unwrap().projector();
        assert!(s1.r_block.max_abs_diff(&phi1) < 1e-12);
        assert!(dec.reconstruct(&b).unwrap().max_abs_diff(&rho) <= 1e-9);
    }

    #[test]
    fn maximally_mixed_input() {
        for n in 1..=3 {
            let b = schur_transform(n).unwrap();
            let d = 1usize << n;
            let dec = bipartite_sector_decompose(&DensityOperator::maximally_mixed(d * d), n, &b).unwrap();
            for block in &dec.blocks {
                let wa = block.j_a.dim() as f64 * multiplicity(n, block.j_a).unwrap() as f64;
                let wb = block.j_b.dim() as f64 * multiplicity(n, block.j_b).unwrap() as f64;
                assert!((block.weight - wa * wb / (d * d) as f64).abs() < 1e-12);
                let rd = block.r_block.dim();
                assert!(block.r_block.max_abs_diff(&DensityOperator::maximally_mixed(rd)) < 1e-12);
                let pd = block.p_block.dim();
                assert!(block.p_block.max_abs_diff(&DensityOperator::maximally_mixed(pd)) < 1e-12);
            }
            assert!((dec.total_weight() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn untwirled_input_rejected() {
        let b = schur_transform(2).unwrap();
        let err = bipartite_sector_decompose(&bell_pairs(2).projector(), 2, &b);
        // |Φ⟩ has coherences between (0,0) and (1,1) sectors
        assert!(matches!(err, Err(Error::NotBlockDiagonal { .. })));
    }

    #[test]
    fn non_product_sector_is_flagged() {
        // Both-sided S_n twirls always factor; sector dephasing alone does not.
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let n = 2;
        let b = schur_transform(n).unwrap();
        let rho = random_density(4, &mut rng).tensor(&random_density(4, &mut rng));
        let twirled = bipartite_twirl_fast(&rho, &b, Ssr::SymmetricGroup).unwrap();
        let dec = bipartite_sector_decompose(&twirled, n, &b).unwrap();
        assert!(dec.is_product_form);
        assert!((dec.total_weight() - 1.0).abs() < 1e-9);

        let n = 3;
        let b = schur_transform(n).unwrap();
        let mixed = random_density(64, &mut rng);
        // S_n-twirled on both sides: product form is automatic (I/c on P factors)
        let twirled = bipartite_twirl_fast(&mixed, &b, Ssr::SymmetricGroup).unwrap();
        let dec = bipartite_sector_decompose(&twirled, n, &b).unwrap();
        assert!(dec.is_product_form);
        // only sector-dephased: permutation coherences survive, not a product
        let u_dag = b.transform().matrix().adjoint();
        let y = conjugate_local(mixed.matrix(), &u_dag, &u_dag);
        let d = b.dim();
        let ns = b.sectors().len();
        let dephased = DMatrix::from_fn(d * d, d * d, |x, z| {
            let px = b.sector_position(x / d) * ns + b.sector_position(x % d);
            let pz = b.sector_position(z / d) * ns + b.sector_position(z % d);
            if px == pz { y[(x, z)] } else { C64::from(0.0) }
        });
        let dec = decompose_schur(&dephased, n, &b).unwrap();
        assert!(!dec.is_product_form);
        assert!(dec.product_residual > 1e-6);
    }

    #[test]
    fn wrong_sizes() {
        let b = schur_transform(2).unwrap();
        assert!(bipartite_sector_decompose(&DensityOperator::maximally_mixed(16), 3, &b).is_err());
        assert!(bipartite_sector_decompose(&DensityOperator::maximally_mixed(8), 2, &b).is_err());
    }
}
