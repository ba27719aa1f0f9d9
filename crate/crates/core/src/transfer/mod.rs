//! Transfer of cover witnesses along an isometric action: a witness on the
//! space together with witnesses on a quasi-stabilizer yields a witness on
//! the group window, which is then re-verified independently.

mod build;
mod plan;
mod verify;

pub use build::{
    build_transfer, check_preconditions, choose_anchor, AnchorEntry, BlockOrigin, PreconditionReport,
    TransferFamily, TransferOptions, TransferReport,
};
pub use plan::{index_pair, pair_index, plan_scales, TransferPlan};
pub use verify::{verify_transfer, CaseCheck, FamilyCertificate, PullbackCheck, TransferVerification};
