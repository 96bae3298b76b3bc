//! Quasi-arithmetic annealing paths between unnormalized densities, the rho-tau
//! Bregman divergences they minimize, q-exponential families, numerical checks of
//! the barycenter and geodesic characterizations, and an annealed importance
//! sampler that runs along any such path.
//!
//! | module          | contents                                                    |
//! |-----------------|-------------------------------------------------------------|
//! | [`deformed`]    | `log_q`, `exp_q`, representations, rho-tau generator pairs  |
//! | [`density`]     | tabulated densities on grids and discrete supports          |
//! | [`paths`]       | quasi-arithmetic means and annealing paths                  |
//! | [`divergences`] | rho-tau Bregman divergences, Bregman information, named zoo |
//! | [`parametric`]  | q-exponential and likelihood-ratio families                 |
//! | [`verify`]      | brute-force barycenters, geodesic residuals, check suites   |
//! | [`sampler`]     | annealed importance sampling                                |
//! | [`cli`]         | the `anneal` command line                                   |

pub mod cli;
pub mod deformed;
pub mod density;
pub mod divergences;
pub mod error;
pub mod parametric;
pub mod paths;
pub mod sampler;
pub mod verify;

pub use deformed::{q_exp, q_log, Representation, RhoTauPair};
pub use density::{materialize, Density, DensitySpec, Family, Support};
pub use error::{Error, Result};
