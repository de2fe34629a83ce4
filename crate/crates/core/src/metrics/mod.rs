//! Listener-rating ingestion and agreement / recognition metrics.

mod confusion;
mod kappa;
mod ratings;
mod report;
mod simulate;

pub use confusion::{confusion_from_ratings, orphan_sample_ids, uar, ConfusionMatrix};
pub use kappa::fleiss_kappa;
pub use ratings::{
    level_to_class, load_ratings, read_ratings, save_ratings, write_ratings, Class,
    RatingDimension, RatingRecord, RATINGS_HEADER,
};
pub use report::{evaluate, kappa_items, ConfusionEntry, EvaluationReport, KappaRow, UarRow};
pub use simulate::{rater_id, simulate_ratings, SimulationMode};
