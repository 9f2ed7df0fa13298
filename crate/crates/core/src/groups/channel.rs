use nalgebra::DMatrix;

use super::FiniteGroupRep;
use crate::error::{Error, Result};
use crate::linalg::{max_abs_diff, tol, DensityOperator, Ket, Operator, C64};

/// A completely positive trace-preserving map in Kraus form.
#[derive(Clone, Debug)]
pub struct QuantumChannel {
    dim: usize,
    kraus: Vec<Operator>,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<Operator>) -> Result<Self> {
        Self::with_tolerance(kraus, tol::VALIDATION)
    }

    pub fn with_tolerance(kraus: Vec<Operator>, tol: f64) -> Result<Self> {
        let dim = kraus.first().ok_or(Error::Empty("Kraus operators"))?.dim();
        let mut sum = DMatrix::<C64>::zeros(dim, dim);
        for k in &kraus {
            k.check_dim(dim)?;
            sum += k.matrix().adjoint() * k.matrix();
        }
        let residual = max_abs_diff(&sum, &DMatrix::identity(dim, dim));
        if residual > tol {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(Self { dim, kraus })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            kraus: vec![Operator::identity(dim)],
        }
    }

    /// `ρ ↦ U ρ U†`.
    pub fn unitary(u: Operator) -> Result<Self> {
        let residual = u.unitarity_residual();
        if residual > tol::VALIDATION {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self {
            dim: u.dim(),
            kraus: vec![u],
        })
    }

    /// The twirl superoperator as a channel, Kraus set `{T(g)/√|G|}`.
    pub fn twirl(rep: &FiniteGroupRep) -> Self {
        let w = C64::from((rep.order() as f64).sqrt().recip());
        Self {
            dim: rep.dim(),
            kraus: rep.elements().map(|t| t.scale(w)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[Operator] {
        &self.kraus
    }

    /// `Σ_k K X K†`; linear, so valid on any operator.
    pub fn apply_operator(&self, x: &Operator) -> Result<Operator> {
        x.check_dim(self.dim)?;
        let out = self
            .kraus
            .iter()
            .fold(DMatrix::<C64>::zeros(self.dim, self.dim), |acc, k| {
                acc + k.matrix() * x.matrix() * k.matrix().adjoint()
            });
        Ok(Operator::from_matrix_unchecked(out))
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        Ok(DensityOperator::from_operator_unchecked(self.apply_operator(rho.as_operator())?))
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &QuantumChannel) -> Result<QuantumChannel> {
        if first.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: first.dim,
            });
        }
        let kraus = self
            .kraus
            .iter()
            .flat_map(|a| first.kraus.iter().map(move |b| a * b))
            .collect();
        Ok(Self { dim: self.dim, kraus })
    }

    /// Largest entrywise difference of the two channels' outputs over [`probe_states`].
    pub fn max_action_diff(&self, other: &QuantumChannel) -> Result<f64> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut worst: f64 = 0.0;
        for probe in probe_states(self.dim) {
            let a = self.apply_operator(probe.as_operator())?;
            let b = other.apply_operator(probe.as_operator())?;
            worst = worst.max(a.max_abs_diff(&b));
        }
        Ok(worst)
    }
}

/// `dim²` pure states spanning all operators: `|i⟩`, `(|i⟩+|j⟩)/√2`, `(|i⟩+i|j⟩)/√2` for `i < j`.
pub fn probe_states(dim: usize) -> Vec<DensityOperator> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut probes = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        probes.push(Ket::basis(dim, i).projector());
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            for phase in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                let mut amps = vec![C64::from(0.0); dim];
                amps[i] = C64::from(s);
                amps[j] = phase * s;
                probes.push(Ket::from_vector_unchecked(nalgebra::DVector::from_vec(amps)).projector());
            }
        }
    }
    probes
}

/// Checks `𝒪[T ρ T†] = T 𝒪[ρ] T†` for all elements over a spanning probe set.
/// Returns the verdict at `tol` together with the largest residual.
pub fn is_g_covariant(ch: &QuantumChannel, rep: &FiniteGroupRep, tol: f64) -> Result<(bool, f64)> {
    if ch.dim() != rep.dim() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim(),
            got: ch.dim(),
        });
    }
    let mut worst: f64 = 0.0;
    for probe in probe_states(ch.dim()) {
        let out = ch.apply_operator(probe.as_operator())?;
        for k in 0..rep.order() {
            let moved = Operator::from_matrix_unchecked(rep.conjugate(k, probe.matrix()));
            let lhs = ch.apply_operator(&moved)?;
            let rhs = rep.conjugate(k, out.matrix());
            worst = worst.max(max_abs_diff(lhs.matrix(), &rhs));
        }
    }
    Ok((worst <= tol, worst))
}

/// `𝒢 ∘ ℰ ∘ 𝒢` with Kraus operators `|G|^{-1/2} T(g) · K · |G|^{-1/2} T(h)†`.
pub fn sandwich(ch: &QuantumChannel, rep: &FiniteGroupRep) -> Result<QuantumChannel> {
    if ch.dim() != rep.dim() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim(),
            got: ch.dim(),
        });
    }
    let w = C64::from(1.0 / rep.order() as f64);
    let elements: Vec<Operator> = rep.elements().collect();
    let mut kraus = Vec::with_capacity(elements.len() * elements.len() * ch.kraus().len());
    for tg in &elements {
        for k in ch.kraus() {
            let left = tg * k;
            for th in &elements {
                kraus.push(Operator::from_matrix_unchecked(left.matrix() * th.matrix().adjoint() * w));
            }
        }
    }
    Ok(QuantumChannel { dim: ch.dim(), kraus })
}
