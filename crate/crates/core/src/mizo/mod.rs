//! Multi-information with zeroth-order active regret minimisation.
//!
//! A view's sources are mixed under policy weights `theta`, tilted by the
//! view's text scaling factor, and summarised by the mixture's entropy. The
//! weights are tuned online, without gradients, to maximise the MI between
//! that score and the correctness of the system's responses; a weight update
//! survives only if it raises the step's MI. A max-margin separator between
//! additive (Up) and reductive (Down) mixture bins is trained alongside.

mod mixture;
mod planted;
mod run;
mod separator;
mod state;
mod zo;

pub use mixture::{mixing_weights, mixture_score, view_scores, MixtureScore, ViewSources, GRID_BINS};
pub use planted::planted_task;
pub use run::{feedback_schedule, mi_of_score, run_mizo, MizoConfig, MizoInput, MizoRun, StepLog, SCORE_RESOLUTION, UNIT_FEATURES};
pub use separator::{classify_units, max_margin_step, Orientation, UnitSample, PMI_CLAMP};
pub use state::{improves, on_mi_grid, regret, MizoState, Phi, Separator, IMPROVEMENT_TOLERANCE, MI_GRID};
pub use zo::{
    mean_direction, project_simplex, propose, random_directions, floored, zo_coefficient, zo_update, zo_update_with,
    ZoOutcome,
    PERTURBATION_SCALE,
};
