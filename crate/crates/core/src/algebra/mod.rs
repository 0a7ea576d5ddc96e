//! Finite rings, abelian groups, modules, and the constructions between them.

mod group;
mod hom;
mod ideal;
mod module;
pub mod numtheory;
pub mod poly;
mod ring;
mod smith;
mod spec;
mod tensor;

pub use group::{Elem, FiniteAbelianGroup};
pub use hom::{check_ring_hom, RingHom};
pub use ideal::{
    all_ideals, find_homomorphism, find_isomorphism, find_matrix_field_quotient, generated_subring,
    ideal_generated, maximal_ideals, principal_ideal, quotient, ring_generators, IdealMask,
    MatrixFieldQuotient, DEFAULT_SEARCH_BOUND,
};
pub use module::{module_structures, parse_module_spec, CoprimeSplit, Module, FULL_SCAN_CAP};
pub use ring::{parse_ring_spec, FiniteRing, MAX_TABLE_RING, TABLE_CAP};
pub use smith::{smith, Smith};
pub use spec::RingSpec;
pub use tensor::{tensor_ring, TensorRing};

/// Least c ≥ 1 with c·1 = 0.
pub fn ring_characteristic(r: &FiniteRing) -> u64 {
    r.characteristic()
}

pub fn opposite_ring(r: &FiniteRing) -> FiniteRing {
    FiniteRing::opposite(r)
}

pub fn two_sided_module(r: &FiniteRing) -> crate::Result<Module> {
    Module::two_sided(r)
}

pub fn vector_module(m: &Module, t: usize) -> crate::Result<Module> {
    Module::vector(m, t)
}

pub fn is_faithful(m: &Module) -> bool {
    m.is_faithful()
}

pub fn faithful_quotient(m: &Module) -> crate::Result<(RingHom, Module)> {
    m.faithful_quotient()
}

pub fn decompose_coprime(m: &Module) -> crate::Result<CoprimeSplit> {
    m.decompose_coprime()
}
