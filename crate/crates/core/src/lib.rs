pub mod cli;
pub mod error;
pub mod gibbs_sampler;
pub mod lattice_counting;
pub mod random_tensor_lab;
pub mod spectral_core;
pub mod stats;
pub mod tensor_norms;
pub mod wick_nls_dynamics;
