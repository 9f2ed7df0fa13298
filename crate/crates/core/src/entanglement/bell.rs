use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{entanglement_entropy, tensor_power, Ket, SubsystemPermute, SubsystemShape, C64};
use crate::schur::{multiplicity, SchurBasis, SpinLabel};

/// Largest pair count for dense 4^n-dimensional kets.
const MAX_DENSE_PAIRS: usize = 6;

/// `|Φ⁺⟩^{⊗n}` with Alice's qubits first: `2^{-n/2} Σ_x |x⟩_A |x⟩_B`.
#[derive(Clone, Debug)]
pub struct BellEnsembleState {
    pub n_pairs: usize,
    pub ket: Ket,
}

impl BellEnsembleState {
    /// Alice-block dimension `2^n`.
    pub fn side_dim(&self) -> usize {
        1 << self.n_pairs
    }

    /// Entropy of entanglement across Alice|Bob, in ebits.
    pub fn unconstrained_ebits(&self) -> f64 {
        let d = self.side_dim();
        entanglement_entropy(&self.ket, [d, d]).expect("shape matches by construction")
    }

    /// The same state via `|Φ⁺⟩^{⊗n}` and a reordering of interleaved factors.
    pub fn from_tensor_power(n: usize) -> Result<Ket> {
        check_pairs(n)?;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let pair = Ket::from_real(&[s, 0.0, 0.0, s])?;
        let perm: Vec<usize> = (0..n).map(|i| 2 * i).chain((0..n).map(|i| 2 * i + 1)).collect();
        tensor_power(&pair, n).permute_subsystems(&SubsystemShape::uniform(2 * n, 2)?, &perm)
    }

    /// Coefficients of the ket in Schur ⊗ Schur coordinates, `(U ⊗ U)† |Φ⟩`.
    pub fn schur_coefficients(&self, basis: &SchurBasis) -> Result<DVector<C64>> {
        basis.check_same(self.n_pairs)?;
        let d = basis.dim();
        let u_dag = basis.transform().matrix().adjoint();
        let psi = nalgebra::DMatrix::from_column_slice(d * d, 1, self.ket.amplitudes().as_slice());
        Ok(crate::linalg::kron_left_mul(&u_dag, &u_dag, &psi).column(0).into_owned())
    }
}

fn check_pairs(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Empty("pair count"));
    }
    if n > MAX_DENSE_PAIRS {
        return Err(Error::TooLarge(format!("4^{n} exceeds the dense limit 4096")));
    }
    Ok(())
}

pub fn bell_ensemble(n: usize) -> Result<BellEnsembleState> {
    check_pairs(n)?;
    let d = 1usize << n;
    let amp = C64::from((d as f64).sqrt().recip());
    let mut amps = DVector::zeros(d * d);
    for x in 0..d {
        amps[x * d + x] = amp;
    }
    Ok(BellEnsembleState {
        n_pairs: n,
        ket: Ket::from_vector_unchecked(amps),
    })
}

fn maximally_entangled(dim: usize) -> Ket {
    let amp = C64::from((dim as f64).sqrt().recip());
    let mut amps = DVector::zeros(dim * dim);
    for k in 0..dim {
        amps[k * dim + k] = amp;
    }
    Ket::from_vector_unchecked(amps)
}

/// `|φ_j⟩ = Σ_m |j,m⟩|j,m⟩ / √(2j+1)` on `ℍ_{jR}^a ⊗ ℍ_{jR}^b`.
pub fn phi_state(j: SpinLabel, basis: &SchurBasis) -> Result<Ket> {
    if !j.is_valid_for(basis.n()) {
        return Err(Error::InvalidSpin {
            n: basis.n(),
            two_j: j.two_j(),
        });
    }
    Ok(maximally_entangled(j.dim()))
}

/// `|χ_j⟩ = Σ_r |j,r⟩|j,r⟩ / √c_j` on `ℍ_{jP}^a ⊗ ℍ_{jP}^b`.
pub fn chi_state(n: usize, j: SpinLabel, basis: &SchurBasis) -> Result<Ket> {
    basis.check_same(n)?;
    let c = multiplicity(n, j)? as usize;
    Ok(maximally_entangled(c))
}

/// The maximally entangled state of the largest noiseless subsystem `j₀ = n/2`,
/// embedded in `4^n` dimensions, with its entanglement `log₂(n+1)`.
pub fn max_ns_state(n: usize, basis: &SchurBasis) -> Result<(Ket, f64)> {
    check_pairs(n)?;
    basis.check_same(n)?;
    let top = SpinLabel::new(n, n)?;
    let sector = basis.sector(top).expect("j = n/2 always present");
    debug_assert_eq!(sector.multiplicity, 1);
    let d = basis.dim();
    let u = basis.transform().matrix();
    let amp = C64::from(((n + 1) as f64).sqrt().recip());
    let mut amps = DVector::<C64>::zeros(d * d);
    for m in 0..top.dim() {
        let col = u.column(sector.index(0, m));
        for a in 0..d {
            if col[a] == C64::from(0.0) {
                continue;
            }
            for b in 0..d {
                amps[a * d + b] += amp * col[a] * col[b];
            }
        }
    }
    let ket = Ket::from_vector_unchecked(amps);
    let ebits = entanglement_entropy(&ket, [d, d])?;
    Ok((ket, ebits))
}
