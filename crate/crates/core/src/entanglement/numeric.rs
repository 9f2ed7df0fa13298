use super::bell::bell_ensemble;
use super::closed::{EntanglementReport, Method};
use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, partial_trace, vn_entropy, DensityOperator, Ket, SubsystemShape};
use crate::schur::sectors::decompose_schur;
use crate::schur::twirl::bipartite_twirl_schur;
use crate::schur::{bipartite_sector_decompose, bipartite_sn_twirl_brute, SchurBasis, SectorDecomposition, Ssr};

/// A sector block counts as pure when its second-largest eigenvalue is below this.
pub const PURITY_TOL: f64 = 1e-8;

const MAX_FAST_PAIRS: usize = 5;
const MAX_BRUTE_PAIRS: usize = 4;

/// How the both-sided twirl is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwirlPath {
    /// Explicit sum over both copies of the group.
    BruteForce,
    /// Sector-wise evaluation in Schur coordinates.
    Fast,
}

/// Constrained entanglement of a pure state on `n + n` qubits (Alice's block first):
/// twirl both sides, split into sectors, and sum `p · E` over sectors.
///
/// Under S_n the surviving entanglement sits in the rotation factors, under
/// collective SU(2) in the permutation factors. Each such factor must be pure;
/// otherwise [`Error::MixedSector`] is returned.
pub fn constrained_entanglement_numeric(
    psi: &Ket,
    n: usize,
    ssr: Ssr,
    basis: &SchurBasis,
    path: TwirlPath,
) -> Result<(f64, SectorDecomposition)> {
    basis.check_same(n)?;
    let rho = psi.projector();
    let decomposition = match path {
        TwirlPath::BruteForce => {
            if ssr != Ssr::SymmetricGroup {
                return Err(Error::Unsupported(
                    "brute-force twirl over a continuous group; use the fast path".into(),
                ));
            }
            if n > MAX_BRUTE_PAIRS {
                return Err(Error::TooLarge(format!("brute-force twirl limited to n ≤ {MAX_BRUTE_PAIRS}, got {n}")));
            }
            let twirled = bipartite_sn_twirl_brute(&rho, n)?;
            bipartite_sector_decompose(&twirled, n, basis)?
        }
        TwirlPath::Fast => {
            if n > MAX_FAST_PAIRS {
                return Err(Error::TooLarge(format!("dense bipartite twirl limited to n ≤ {MAX_FAST_PAIRS}, got {n}")));
            }
            let y = bipartite_twirl_schur(rho.as_operator(), basis, ssr)?;
            decompose_schur(&y, n, basis)?
        }
    };

    let mut total = 0.0;
    for block in &decomposition.blocks {
        let (state, dims) = match ssr {
            Ssr::SymmetricGroup => (&block.r_block, [block.j_a.dim(), block.j_b.dim()]),
            Ssr::CollectiveSu2 => {
                let ca = basis.sector(block.j_a).expect("sector from this basis").multiplicity;
                let cb = basis.sector(block.j_b).expect("sector from this basis").multiplicity;
                (&block.p_block, [ca, cb])
            }
        };
        total += block.weight * block_entanglement(state, dims, block)?;
    }
    Ok((total, decomposition))
}

fn block_entanglement(
    state: &DensityOperator,
    dims: [usize; 2],
    block: &crate::schur::SectorBlock,
) -> Result<f64> {
    let values = eigvalsh(state.as_operator());
    let second = values.get(1).copied().unwrap_or(0.0);
    if second > PURITY_TOL {
        return Err(Error::MixedSector {
            two_ja: block.j_a.two_j(),
            two_jb: block.j_b.two_j(),
            weight: block.weight,
            second_eigenvalue: second,
        });
    }
    let shape = SubsystemShape::new(dims.to_vec())?;
    Ok(vn_entropy(&partial_trace(state, &shape, &[0])?))
}

impl EntanglementReport {
    /// Both constrained values for `n` Bell pairs by explicit twirling (`n ≤ 4`).
    ///
    /// The S_n value uses the brute-force group sum; collective SU(2) has no
    /// finite sum, so its value comes from the sector-wise twirl.
    pub fn numeric(n: usize, basis: &SchurBasis) -> Result<Self> {
        if n > MAX_BRUTE_PAIRS {
            return Err(Error::TooLarge(format!("numeric report limited to n ≤ {MAX_BRUTE_PAIRS}, got {n}")));
        }
        let state = bell_ensemble(n)?;
        let (sn, _) = constrained_entanglement_numeric(&state.ket, n, Ssr::SymmetricGroup, basis, TwirlPath::BruteForce)?;
        let (su2, _) = constrained_entanglement_numeric(&state.ket, n, Ssr::CollectiveSu2, basis, TwirlPath::Fast)?;
        Ok(Self {
            n_pairs: n,
            unconstrained_ebits: state.unconstrained_ebits(),
            sn_constrained_ebits: sn,
            su2_constrained_ebits: su2,
            method: Method::BruteForce,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::{
        constrained_entanglement_bell_closed, constrained_entanglement_bell_su2_closed, max_ns_state,
        phi_state,
    };
    use crate::linalg::{Operator, Tensor, C64};
    use crate::schur::{bipartite_twirl_fast, schur_transform, valid_spins, SpinLabel};

    #[test]
    fn two_pairs_sn() {
        let basis = schur_transform(2).unwrap();
        let bell = bell_ensemble(2).unwrap();
        for path in [TwirlPath::BruteForce, TwirlPath::Fast] {
            let (e, dec) =
                constrained_entanglement_numeric(&bell.ket, 2, Ssr::SymmetricGroup, &basis, path).unwrap();
            assert!((e - 0.75 * 3f64.log2()).abs() < 1e-10);
            assert!((e - 1.188722).abs() < 1e-6);
            assert!(dec.is_product_form);
            assert!((dec.total_weight() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn single_pair_is_untouched() {
        let basis = schur_transform(1).unwrap();
        let bell = bell_ensemble(1).unwrap();
        let (e, _) =
            constrained_entanglement_numeric(&bell.ket, 1, Ssr::SymmetricGroup, &basis, TwirlPath::BruteForce).unwrap();
        assert!((e - 1.0).abs() < 1e-10);
    }

    #[test]
    fn product_state_has_none() {
        let basis = schur_transform(2).unwrap();
        let psi = Ket::basis(16, 0);
        for ssr in [Ssr::SymmetricGroup, Ssr::CollectiveSu2] {
            let (e, _) = constrained_entanglement_numeric(&psi, 2, ssr, &basis, TwirlPath::Fast).unwrap();
            assert!(e.abs() < 1e-10);
        }
    }

    #[test]
    fn closed_form_matches_numeric() {
        for n in 1..=4 {
            let basis = schur_transform(n).unwrap();
            let report = EntanglementReport::numeric(n, &basis).unwrap();
            let sn = constrained_entanglement_bell_closed(n).unwrap();
            let su2 = constrained_entanglement_bell_su2_closed(n).unwrap();
            assert!((report.sn_constrained_ebits - sn).abs() < 1e-8, "n={n}");
            assert!((report.su2_constrained_ebits - su2).abs() < 1e-8, "n={n}");
            assert!((report.unconstrained_ebits - n as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn five_pairs_fast_path() {
        let basis = schur_transform(5).unwrap();
        let bell = bell_ensemble(5).unwrap();
        let (sn, _) =
            constrained_entanglement_numeric(&bell.ket, 5, Ssr::SymmetricGroup, &basis, TwirlPath::Fast).unwrap();
        assert!((sn - constrained_entanglement_bell_closed(5).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn su2_brute_force_unsupported() {
        let basis = schur_transform(2).unwrap();
        let bell = bell_ensemble(2).unwrap();
        let err =
            constrained_entanglement_numeric(&bell.ket, 2, Ssr::CollectiveSu2, &basis, TwirlPath::BruteForce)
                .unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn mixed_sector_reported() {
        // Alice's two j=1/2 copies correlate with orthogonal Bob states; tracing out
        // Alice's permutation factor leaves a mixed rotation block.
        let basis = schur_transform(3).unwrap();
        let half = SpinLabel::new(3, 1).unwrap();
        let top = SpinLabel::new(3, 3).unwrap();
        let a0 = basis.coupled_state(half, 0, 1).unwrap();
        let a1 = basis.coupled_state(half, 1, 1).unwrap();
        let b0 = basis.coupled_state(top, 0, 3).unwrap();
        let b1 = basis.coupled_state(top, 0, 2).unwrap();
        let s = C64::from(std::f64::consts::FRAC_1_SQRT_2);
        let amps = (a0.tensor(&b0).amplitudes() + a1.tensor(&b1).amplitudes()) * s;
        let psi = Ket::new(amps.as_slice().to_vec()).unwrap();
        let result = constrained_entanglement_numeric(&psi, 3, Ssr::SymmetricGroup, &basis, TwirlPath::Fast);
        match result {
            Err(Error::MixedSector { second_eigenvalue, two_ja, two_jb, .. }) => {
                assert!(second_eigenvalue > PURITY_TOL);
                assert_eq!((two_ja, two_jb), (1, 3));
            }
            other => panic!("expected a mixed sector, got {other:?}"),
        }
        // Alice's permutation factor is mixed as well
        assert!(constrained_entanglement_numeric(&psi, 3, Ssr::CollectiveSu2, &basis, TwirlPath::Fast).is_err());
    }

    #[test]
    fn twirled_bell_is_sector_mixture() {
        for n in 1..=3 {
            let basis = schur_transform(n).unwrap();
            let bell = bell_ensemble(n).unwrap();
            let twirled = bipartite_twirl_fast(&bell.ket.projector(), &basis, Ssr::SymmetricGroup).unwrap();
            let d = basis.dim();
            let mut expected = Operator::zeros(d * d);
            for spin in valid_spins(n) {
                let sector = basis.sector(spin).unwrap();
                let (dj, c) = (spin.dim() as f64, sector.multiplicity as f64);
                let w = dj * c / d as f64;
                let phi = phi_state(spin, &basis).unwrap().projector();
                // σ_j: maximally mixed on the permutation factors of both sides
                let mut sigma = Operator::zeros(d * d);
                for ra in 0..sector.multiplicity {
                    for rb in 0..sector.multiplicity {
                        let mut proj = Operator::zeros(d * d);
                        for ma in 0..spin.dim() {
                            for mb in 0..spin.dim() {
                                for ma2 in 0..spin.dim() {
                                    for mb2 in 0..spin.dim() {
                                        let row = sector.index(ra, ma) * d + sector.index(rb, mb);
                                        let col = sector.index(ra, ma2) * d + sector.index(rb, mb2);
                                        let amp = phi.get(ma * spin.dim() + mb, ma2 * spin.dim() + mb2);
                                        proj = &proj + &Operator::outer(
                                            &Ket::basis(d * d, row),
                                            &Ket::basis(d * d, col),
                                        )
                                        .scale(amp);
                                    }
                                }
                            }
                        }
                        sigma = &sigma + &proj;
                    }
                }
                let sigma = sigma.scale((1.0 / (c * c)).into());
                let u = basis.transform();
                let uu = u.tensor(u);
                expected = &expected + &sigma.conjugate_by(&uu).scale(w.into());
            }
            assert!(twirled.max_abs_diff(&expected) < 1e-10, "n={n}");
        }
    }

    #[test]
    fn max_ns_state_is_fixed() {
        for n in 1..=3 {
            let basis = schur_transform(n).unwrap();
            let (psi, _) = max_ns_state(n, &basis).unwrap();
            let rho = psi.projector();
            let twirled = bipartite_twirl_fast(&rho, &basis, Ssr::SymmetricGroup).unwrap();
            assert!(twirled.max_abs_diff(&rho) < 1e-10, "n={n}");
        }
    }
}
