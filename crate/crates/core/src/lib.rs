pub mod divisor_theory;
pub mod exact_lattice;
pub mod multigraph;
pub mod product_complex;
pub mod product_maps;
