//! Exact models of the 2-box spaces.

mod algebra;
mod coset;

pub use algebra::{
    coproduct, corr, delta, dominated_by, fourier, is_biprojection, join_projection, landau_projection,
    meet_projection, projection_angle, Side, TwoBoxElement,
};
pub use coset::{
    biprojection_of, jones_projection, p_element, product_basis_sum, q_element, trace_of_q_closed_form,
    v_vector, CosetFunction, CosetModel, UnitVector,
};
