//! Finite CCS, its reversible extension RCCS, configuration-structure
//! semantics and the equivalences between them.

pub mod confstruct;
pub mod corpus;
pub mod encoding;
pub mod equivalences;
pub mod rccs;
pub mod syntax;

pub use confstruct::{ConfStruct, EventIdx, EventSet};
pub use encoding::{encode_ccs, encode_rccs, Address, EncodingError};
pub use equivalences::{EquivOptions, EquivalenceError, EquivalenceVerdict, Witness};
pub use rccs::{lift, Direction, Memory, RccsError, RccsTerm, TransitionLabel};
pub use syntax::{parse, Action, CcsTerm, Context, Name, SyntaxError};
