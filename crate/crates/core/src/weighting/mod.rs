//! Term weighting: `x_ij = local(tf_ij) * global(t_i) * norm(d_j)`.

mod global;
mod local;
mod model;
mod stats;

pub use global::{
    entropy_h, global_weight, imbalance_x, regularize, scale, GlobalScheme, ScalingFn,
};
pub use local::{local_weight, LocalScheme};
pub use model::{fit_weight_model, vectorize, WeightModel};
pub use stats::{contingency_counts, CollectionStats, TermContingency};
