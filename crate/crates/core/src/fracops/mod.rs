//! Fractional operators applied to fundamental solutions, the convolution
//! identity, and the auxiliary one-dimensional identities.

mod auxiliary;
mod conformal;
mod direct;
mod nongeom;
mod orbit;

pub use auxiliary::{cowboy_closed, cowboy_lhs, h_deriv_formula, h_func, jtwisted_gaussian, JTwisted};
pub use conformal::{
    conformal_apply, conformal_apply_via, conv_lemma_spectral, riesz_apply, validate_mirror, MinusFamily, MirrorReport,
    MIRROR_TOL,
};
pub use direct::{
    chapman_lhs, conv_direct, group_convolution, heat_mass, radial_mass, thin_kernel_mass, KernelTable, TABLE_NODES,
};
pub use nongeom::{
    frac_power_on_constant, frac_power_on_fundsol, frac_power_on_fundsol_via, nongeom_fundsol, semigroup_on_fundsol,
    Domain, Route,
};
pub use orbit::central_difference;
