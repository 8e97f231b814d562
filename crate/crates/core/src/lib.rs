//! Dense packings of equal disks in a circular container.
//!
//! The crate covers four areas that share one [`Packing`] value type:
//!
//! * [`formulas`]: closed forms for the curved hexagonal family (disk counts,
//!   container-to-disk ratio, covering density, variant counts);
//! * [`construct`]: deterministic builders for every curved hexagonal packing,
//!   either from a path permutation or by filling layers from the rim inward;
//! * [`sim`]: an event-driven simulator of elastic disks whose common radius grows
//!   until the configuration jams;
//! * [`analysis`]: contact graphs, rattlers, first-order rigidity, regularity and
//!   congruence matching.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, batch runs and the
//! command-line front end live in the `diskpack` companion crate.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod analysis;
pub mod construct;
pub mod fingerprint;
pub mod formulas;
pub mod geom;
pub mod linalg;
pub mod packing;
pub mod sim;

pub use analysis::{AnalysisReport, ContactGraph};
pub use construct::{AttachmentSpec, Chirality, FlipSpec, PathSpec};
pub use fingerprint::{congruent, fingerprint, CongruenceFingerprint};
pub use formulas::HexIndex;
pub use geom::Point;
pub use packing::{Measure, Packing, PackingError, Violation};
