//! Interactive prover/classifier games on finite two-class data spaces.
//!
//! The crate has two halves that share one vocabulary:
//!
//! * **Exact side** — [`dataspace`] holds finite weighted point sets with
//!   extensional features, [`metrics`] computes precision/entropy quantities
//!   on them, [`game`] solves the verifier-vs-adversary min-max game by
//!   enumeration, [`certificates`] computes the concentration constant κ and
//!   the context impact α, and [`bounds`] evaluates every closed-form
//!   guarantee that ties those numbers together.
//! * **Trained side** — [`neural`] is a small from-scratch feed-forward
//!   network with exact backprop, [`provers`] runs Frank-Wolfe mask solvers
//!   against a frozen network, and [`harness`] drives the alternating
//!   training loop and the bound-versus-measured evaluation on image data.
//!
//! All numeric kernels are generic over a scalar type implementing
//! [`scalar::Real`]; the aliases below fix `f64` for ordinary use.

pub mod bits;
pub mod bounds;
pub mod certificates;
pub mod dataspace;
pub mod game;
pub mod harness;
pub mod io;
pub mod metrics;
pub mod neural;
pub mod parallel;
pub mod provers;
pub mod scalar;

/// Default scalar for the concrete aliases.
pub type Scalar = f64;

pub type DataSpace = dataspace::FiniteDataSpace<Scalar>;
pub type Network = neural::Network<Scalar>;
pub type OptimizerState = neural::OptimizerState<Scalar>;
pub type ProverConfig = provers::ProverConfig<Scalar>;
pub type MaskProblem = provers::MaskProblem<Scalar>;
pub type TrainConfig = harness::TrainConfig<Scalar>;
pub type Dataset = harness::Dataset<Scalar>;
pub type PixelFeature = harness::PixelFeature<Scalar>;
pub type GuaranteeInputs = bounds::GuaranteeInputs<Scalar>;
