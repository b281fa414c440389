//! Worlds, frames, propositions of both polarities, contexts and the
//! polarization translation.

mod context;
mod frame;
mod polar;
mod prop;
mod text;

pub use context::{ctx_leq, Context, Judgment};
pub use frame::{running_frame, Frame, FrameError, Reach, World};
pub use polar::{
    erase, erase_ctx, erase_neg, erase_pos, polarize_ctx, polarize_hyp, polarize_neg,
    polarize_pos, AtomPolarity, Neg, PolContext, PolJudgment, PolProp, Polarity, PolarityError,
    Pos,
};
pub use prop::{parse_prop, ParseError, Prop};
pub use text::{parse_frame, parse_sequent, Sequent, TextError};
