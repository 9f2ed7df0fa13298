use nalgebra::DMatrix;

use super::SchurBasis;
use crate::error::{Error, Result};
use crate::groups::{sn_permutation_rep, twirl_finite_operator};
use crate::linalg::{conjugate_local, map_left_factor, map_right_factor, DensityOperator, Operator, C64};

/// Which local superselection rule is imposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ssr {
    /// Permutations of the ensemble elements (S_n).
    SymmetricGroup,
    /// Collective rotations (SU(2) acting identically on every qubit).
    CollectiveSu2,
}

/// S_n twirl in Schur coordinates: inter-sector blocks vanish and each sector
/// block becomes `(Tr_r X) ⊗ I_c / c`.
pub(crate) fn sn_twirl_schur(x: &DMatrix<C64>, basis: &SchurBasis) -> DMatrix<C64> {
    let mut out = DMatrix::<C64>::zeros(x.nrows(), x.ncols());
    for s in basis.sectors() {
        let (d, c) = (s.rotation_dim(), s.multiplicity);
        let inv = C64::from(1.0 / c as f64);
        for m in 0..d {
            for mp in 0..d {
                let avg = (0..c).map(|r| x[(s.index(r, m), s.index(r, mp))]).sum::<C64>() * inv;
                for r in 0..c {
                    out[(s.index(r, m), s.index(r, mp))] = avg;
                }
            }
        }
    }
    out
}

/// Collective SU(2) twirl in Schur coordinates: each sector block becomes
/// `I_{2j+1}/(2j+1) ⊗ (Tr_m X)`.
pub(crate) fn su2_twirl_schur(x: &DMatrix<C64>, basis: &SchurBasis) -> DMatrix<C64> {
    let mut out = DMatrix::<C64>::zeros(x.nrows(), x.ncols());
    for s in basis.sectors() {
        let (d, c) = (s.rotation_dim(), s.multiplicity);
        let inv = C64::from(1.0 / d as f64);
        for r in 0..c {
            for rp in 0..c {
                let avg = (0..d).map(|m| x[(s.index(r, m), s.index(rp, m))]).sum::<C64>() * inv;
                for m in 0..d {
                    out[(s.index(r, m), s.index(rp, m))] = avg;
                }
            }
        }
    }
    out
}

pub(crate) fn twirl_schur(x: &DMatrix<C64>, basis: &SchurBasis, ssr: Ssr) -> DMatrix<C64> {
    match ssr {
        Ssr::SymmetricGroup => sn_twirl_schur(x, basis),
        Ssr::CollectiveSu2 => su2_twirl_schur(x, basis),
    }
}

fn single_sided(rho: &DensityOperator, basis: &SchurBasis, ssr: Ssr) -> Result<DensityOperator> {
    rho.check_dim(basis.dim())?;
    let y = twirl_schur(&basis.to_schur(rho.matrix()), basis, ssr);
    Ok(DensityOperator::from_operator_unchecked(Operator::from_matrix_unchecked(basis.from_schur(&y))))
}

/// `(1/n!) Σ_p P(p) ρ P(p)†`, evaluated sector-wise in the Schur basis.
pub fn sn_twirl_fast(rho: &DensityOperator, basis: &SchurBasis) -> Result<DensityOperator> {
    single_sided(rho, basis, Ssr::SymmetricGroup)
}

/// Haar average over collective rotations `R(Ω)^{⊗n}`, evaluated sector-wise.
pub fn su2_collective_twirl_fast(rho: &DensityOperator, basis: &SchurBasis) -> Result<DensityOperator> {
    single_sided(rho, basis, Ssr::CollectiveSu2)
}

fn check_bipartite(rho: &Operator, basis: &SchurBasis) -> Result<()> {
    let d = basis.dim();
    rho.check_dim(d * d)
}

/// Both-sided twirl in Schur ⊗ Schur coordinates; returns the Schur-coordinate matrix.
pub(crate) fn bipartite_twirl_schur(rho: &Operator, basis: &SchurBasis, ssr: Ssr) -> Result<DMatrix<C64>> {
    check_bipartite(rho, basis)?;
    let d = basis.dim();
    let u_dag = basis.transform().matrix().adjoint();
    let y = conjugate_local(rho.matrix(), &u_dag, &u_dag);
    let y = map_left_factor(&y, d, d, |block| twirl_schur(block, basis, ssr));
    Ok(map_right_factor(&y, d, d, |block| twirl_schur(block, basis, ssr)))
}

/// `𝒢ᵃ ⊗ 𝒢ᵇ` on a state of `n + n` qubits ordered Alice-block ⊗ Bob-block.
pub fn bipartite_twirl_fast(rho: &DensityOperator, basis: &SchurBasis, ssr: Ssr) -> Result<DensityOperator> {
    let y = bipartite_twirl_schur(rho.as_operator(), basis, ssr)?;
    let u = basis.transform().matrix();
    let out = conjugate_local(&y, u, u);
    Ok(DensityOperator::from_operator_unchecked(Operator::from_matrix_unchecked(out)))
}

/// `𝒫ᵃ ⊗ 𝒫ᵇ` by explicit summation over both copies of S_n (`n ≤ 4`).
pub fn bipartite_sn_twirl_brute(rho: &DensityOperator, n: usize) -> Result<DensityOperator> {
    if n > 4 {
        return Err(Error::TooLarge(format!("brute-force bipartite twirl limited to n ≤ 4, got {n}")));
    }
    let d = 1usize << n;
    rho.check_dim(d * d)?;
    let rep = sn_permutation_rep(n, 2)?;
    let alice = twirl_finite_operator(rho.as_operator(), &rep.tensor_identity(d))?;
    let both = twirl_finite_operator(&alice, &rep.identity_tensor(d))?;
    Ok(DensityOperator::from_operator_unchecked(both))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{invariance_residual, twirl_finite};
    use crate::linalg::{Ket, SubsystemPermute, SubsystemShape};
    use crate::random::{random_density, random_ket};
    use crate::schur::{collective_rotation, schur_transform};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_qubit_example() {
        let b = schur_transform(2).unwrap();
        let out = sn_twirl_fast(&Ket::basis(4, 1).projector(), &b).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi_p = Ket::from_real(&[0.0, s, s, 0.0]).unwrap().projector();
        let psi_m = Ket::from_real(&[0.0, s, -s, 0.0]).unwrap().projector();
        let mix = &psi_p.scale(C64::from(0.5)) + &psi_m.scale(C64::from(0.5));
        assert!(out.max_abs_diff(&mix) < 1e-15);
        assert!(out.max_abs_diff(&Operator::diagonal(&[0.0, 0.5, 0.5, 0.0])) < 1e-15);
    }

    #[test]
    fn maximally_mixed_unchanged() {
        for n in 1..=4 {
            let b = schur_transform(n).unwrap();
            let mixed = DensityOperator::maximally_mixed(1 << n);
            assert!(sn_twirl_fast(&mixed, &b).unwrap().max_abs_diff(&mixed) < 1e-14);
            assert!(su2_collective_twirl_fast(&mixed, &b).unwrap().max_abs_diff(&mixed) < 1e-14);
        }
    }

    #[test]
    fn fast_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=5 {
            let b = schur_transform(n).unwrap();
            let rep = sn_permutation_rep(n, 2).unwrap();
            for _ in 0..4 {
                let rho = random_density(1 << n, &mut rng);
                let fast = sn_twirl_fast(&rho, &b).unwrap();
                let brute = twirl_finite(&rho, &rep).unwrap();
                assert!(fast.max_abs_diff(&brute) <= 1e-9, "n={n}");
            }
        }
    }

    #[test]
    fn su2_single_qubit_fully_mixes() {
        let b = schur_transform(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let out = su2_collective_twirl_fast(&random_density(2, &mut rng), &b).unwrap();
        assert!(out.max_abs_diff(&DensityOperator::maximally_mixed(2)) < 1e-15);
    }

    #[test]
    fn su2_two_qubit_examples() {
        let b = schur_transform(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = Ket::from_real(&[0.0, s, -s, 0.0]).unwrap().projector();
        let out = su2_collective_twirl_fast(&singlet, &b).unwrap();
        assert!(out.max_abs_diff(&singlet) < 1e-15);

        let out = su2_collective_twirl_fast(&Ket::basis(4, 0).projector(), &b).unwrap();
        let triplet = &(&Operator::identity(4) - &singlet);
        assert!(out.max_abs_diff(&triplet.scale(C64::from(1.0 / 3.0))) < 1e-15);
    }

    #[test]
    fn su2_output_invariant_under_collective_rotations() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in 1..=4 {
            let b = schur_transform(n).unwrap();
            let out = su2_collective_twirl_fast(&random_density(1 << n, &mut rng), &b).unwrap();
            for _ in 0..10 {
                let theta = rng.random_range(0.0..std::f64::consts::TAU);
                let axis = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
                let r = collective_rotation(n, theta, axis);
                assert!(out.conjugate_by(&r).max_abs_diff(&out) <= 1e-9);
            }
        }
    }

    #[test]
    fn twirls_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for n in 2..=4 {
            let b = schur_transform(n).unwrap();
            let rho = random_density(1 << n, &mut rng);
            let ab = su2_collective_twirl_fast(&sn_twirl_fast(&rho, &b).unwrap(), &b).unwrap();
            let ba = sn_twirl_fast(&su2_collective_twirl_fast(&rho, &b).unwrap(), &b).unwrap();
            assert!(ab.max_abs_diff(&ba) <= 1e-9);
        }
    }

    #[test]
    fn bipartite_fast_matches_brute() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for n in 1..=3 {
            let b = schur_transform(n).unwrap();
            let rho = random_ket(1 << (2 * n), &mut rng).projector();
            let fast = bipartite_twirl_fast(&rho, &b, Ssr::SymmetricGroup).unwrap();
            let brute = bipartite_sn_twirl_brute(&rho, n).unwrap();
            assert!(fast.max_abs_diff(&brute) <= 1e-9, "n={n}");
            let d = 1 << n;
            let both = sn_permutation_rep(n, 2).unwrap();
            assert!(invariance_residual(&fast, &both.tensor_identity(d)).unwrap() <= 1e-9);
            assert!(invariance_residual(&fast, &both.identity_tensor(d)).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn bipartite_twirl_is_local() {
        // Twirling Alice ⊗ Bob product = product of single-sided twirls.
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let n = 2;
        let b = schur_transform(n).unwrap();
        let (ra, rb) = (random_density(4, &mut rng), random_density(4, &mut rng));
        use crate::linalg::Tensor;
        let both = bipartite_twirl_fast(&ra.tensor(&rb), &b, Ssr::CollectiveSu2).unwrap();
        let expected = su2_collective_twirl_fast(&ra, &b)
            .unwrap()
            .tensor(&su2_collective_twirl_fast(&rb, &b).unwrap());
        assert!(both.max_abs_diff(&expected) < 1e-12);
        // Swapping the two halves conjugates consistently.
        let shape = SubsystemShape::new(vec![4, 4]).unwrap();
        let swapped = both.permute_subsystems(&shape, &[1, 0]).unwrap();
        let direct = bipartite_twirl_fast(&rb.tensor(&ra), &b, Ssr::CollectiveSu2).unwrap();
        assert!(swapped.max_abs_diff(&direct) < 1e-12);
    }

    #[test]
    fn dimension_errors() {
        let b = schur_transform(2).unwrap();
        assert!(sn_twirl_fast(&DensityOperator::maximally_mixed(8), &b).is_err());
        assert!(bipartite_twirl_fast(&DensityOperator::maximally_mixed(4), &b, Ssr::SymmetricGroup).is_err());
        assert!(bipartite_sn_twirl_brute(&DensityOperator::maximally_mixed(4), 2).is_err());
        assert!(bipartite_sn_twirl_brute(&DensityOperator::maximally_mixed(4), 5).is_err());
    }
}
