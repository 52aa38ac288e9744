//! Thompson's group `F`, realized as `PL₂([0,1])`, with exact dyadic
//! arithmetic throughout.
//!
//! * [`dyadic`]: exact `n / 2^e` numbers.
//! * [`plmap`]: canonical breakpoint maps, composition, supports, slopes.
//! * [`treepair`]: reduced tree-pair diagrams, a second representation.
//! * [`words`]: words over `xₙ`, `a = x₀²`, `b = x₁x₂⁻¹`.
//! * [`wreath`]: `Z wr Z`, its embedding `⟨a, b⟩ ≤ F` and the inverse decomposition.
//! * [`verify`]: checks of the embedding and finite centralizer evidence.
//! * [`cli`]: the `thompson` command.
//!
//! Maps act on the right throughout.

pub mod cli;
pub mod dyadic;
pub mod plmap;
pub mod treepair;
pub mod verify;
pub mod words;
pub mod wreath;

pub use dyadic::{Dyadic, DyadicError};
pub use plmap::{Breakpoint, Interval, OpenInterval, PLMap, PlError, SupportSet};
pub use treepair::{BinTree, TreeError, TreePair};
pub use verify::{BallEntry, Report, VerifyError};
pub use words::{eval_word, generator_map, Generator, Letter, Word, WordError};
pub use wreath::{support_interval, NotInSubgroup, WreathElement, WreathError};
