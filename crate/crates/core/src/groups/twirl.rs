use nalgebra::DMatrix;

use super::FiniteGroupRep;
use crate::error::Result;
use crate::linalg::{DensityOperator, Operator, C64};

/// `|G|⁻¹ Σ_g T(g) X T(g)†` on an arbitrary operator.
pub fn twirl_finite_operator(x: &Operator, rep: &FiniteGroupRep) -> Result<Operator> {
    x.check_dim(rep.dim())?;
    let sum = (0..rep.order()).fold(DMatrix::<C64>::zeros(rep.dim(), rep.dim()), |acc, k| {
        acc + rep.conjugate(k, x.matrix())
    });
    Ok(Operator::from_matrix_unchecked(sum / C64::from(rep.order() as f64)))
}

/// The finite-group twirl of a density operator.
pub fn twirl_finite(rho: &DensityOperator, rep: &FiniteGroupRep) -> Result<DensityOperator> {
    let out = twirl_finite_operator(rho.as_operator(), rep)?;
    Ok(DensityOperator::from_operator_unchecked(out))
}

/// `max_g ‖T(g) ρ T(g)† − ρ‖_max`.
pub fn invariance_residual(rho: &Operator, rep: &FiniteGroupRep) -> Result<f64> {
    rho.check_dim(rep.dim())?;
    Ok((0..rep.order())
        .map(|k| crate::linalg::max_abs_diff(&rep.conjugate(k, rho.matrix()), rho.matrix()))
        .fold(0.0, f64::max))
}

pub fn is_g_invariant_state(rho: &DensityOperator, rep: &FiniteGroupRep, tol: f64) -> Result<bool> {
    Ok(invariance_residual(rho.as_operator(), rep)? <= tol)
}
