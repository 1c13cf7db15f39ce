//! Causally reversible place/transition nets.
//!
//! Nets are unfolded into occurrence nets, reversed by adding an inverse
//! for every event, and encoded as finite coloured nets whose tokens carry
//! their causal histories.

pub mod catalog;
pub mod coloured;
pub mod dot;
pub mod multiset;
pub mod net;
pub mod oracle;
pub mod ptn;
pub mod reversible;
pub mod script;
pub mod traces;
pub mod unfolding;

pub use multiset::{Multiset, Underflow};
pub use net::{
    marking, Arcs, FireError, Label, Marking, MorphismError, Net, NetBuilder, NetError, NetMorphism,
    PlaceId, TransId,
};
pub use unfolding::{
    is_occurrence_net, unfold, CausalStructure, Condition, Event, EventLabels, FoldingMorphism,
    History, Node, OccurrenceCheck, OccurrenceNet, UnfoldError, Unfolding, Violation,
};
pub use reversible::{naive_reversal, reverse_occurrence, Directed, Direction, ReversibleNet};
pub use traces::{
    apply_rewrite, cancel_step, causally_equivalent, equivalence_witness, parabolic_normal_form,
    shorten_to_forward, swap_step, validate, Rewrite, Trace, TraceError,
};
pub use coloured::{
    colour_parse, colour_to_text, encode, match_preset, parse_coloured_marking, parse_substitution, reverse_coloured, subst, Colour,
    ColouredError, ColouredMarking, ColouredNet, ColouredToken, Match, Substitution,
};
pub use oracle::{
    check_correspondence, check_forward_equals_mixed, check_lemma_suite, explore, Bounds,
    relations_from_runs, CorrespondenceReport, Lts, OracleError, ReachReport, RunRelations, Suite, SuiteConfig,
    SuiteReport,
};
pub use ptn::{parse_net, render_net, NetDocument, PtnError};
pub use dot::{coloured_dot, directed_dot, net_dot, occurrence_dot, reversible_dot};
pub use script::{
    parse_command, parse_script, run_repl, run_script, Command, MatchPolicy, ScriptError, Selector, Simulator,
    Target, Transcript,
};
