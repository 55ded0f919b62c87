//! Solitaire and filling on groups.
//!
//! Marbles sit on cells of a group G (Z^d or a free group). A shape C ⊆ S
//! lets a marble jump to the unique hole of a translate gS when both cells
//! are in gC. Filling adds such holes instead. This crate computes moves,
//! closures, excess, orbit normal forms for the triangle and square shapes,
//! contours, orbit graphs and independence in permutive subshifts.

pub mod contour;
pub mod error;
pub mod excess;
pub mod fill;
pub mod group;
pub mod hull;
pub mod io;
pub mod lattice;
pub mod moves;
pub mod orbit;
pub mod pattern;
pub mod square;
pub mod tep;
pub mod triangle;

pub use contour::{contour, corners, parallel_edge_exchange, s_hull, sweep_swap, BiInvariantOrder, Contour};
pub use error::CoreError;
pub use excess::{excess, excess_sets, monotone_replay, rank_exact, visible_excess, ExcessSets};
pub use fill::{filling_closure, filling_closure_with, FillOptions, FillStep, FillTrace};
pub use group::{cyclic_coset_membership, Elem, GroupCtx, LinearWitness, Linearity};
pub use orbit::{delta_metric, diameter, free_line_orbit_count, free_line_orbit_membership, orbit_bfs, OrbitGraph, OrbitLimits};
pub use moves::{apply_move, legal_moves, replay, reverse_trace, MoveRecord, MoveTrace};
pub use pattern::{Pattern, Shape};
