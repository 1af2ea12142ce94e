//! `schreier` — command-line surface over the exact Schreier-space kernel.
//!
//! Every subcommand prints a single line of JSON on standard output and
//! nothing else there; human-readable errors go to standard error. Exit
//! codes classify failures: `0` success, `2` precondition violations
//! (valid syntax, inadmissible input), `3` guard violations (the request
//! is exact but too large), `64` usage errors (malformed input).
//!
//! Runs are reproducible: all tie-breaks in the kernel are fixed, the one
//! randomized surface (`oracle` sampling) takes an explicit `--seed`
//! defaulting to a constant, and `--manifest FILE` records the run
//! (command, arguments, seed, library version, elapsed time) so that
//! `--replay FILE` reproduces the output byte for byte. The elapsed-time
//! field is informational and takes no part in replay.
//!
//! `SCHREIER_MAX_WINDOW` caps every `--window` flag (default 24) before
//! any enumeration starts, as an environment-level guard for shared
//! machines.

mod json;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, CommandFactory, Parser, Subcommand};
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use schreier_core::families::{self, OrderIndex};
use schreier_core::isometry::{self, WitnessSearch};
use schreier_core::rng::SplitMix64;
use schreier_core::vectors::{self, SparseVector};
use schreier_core::{dual, extremality, lambda, oracle, Error};

use json::UsageError;

/// Fixed default for `--seed`, so bare invocations are reproducible.
const DEFAULT_SEED: u64 = 0x5eed_0001;

/// Default cap applied to every `--window` flag; `SCHREIER_MAX_WINDOW`
/// overrides it.
const DEFAULT_MAX_WINDOW: u32 = 24;

const EXIT_PRECONDITION: u8 = 2;
const EXIT_GUARD: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "schreier",
    version,
    about = "Exact combinatorics, norms, and ball geometry of higher-order Schreier spaces",
    disable_help_subcommand = true
)]
struct Cli {
    /// Re-run a recorded manifest, reproducing its output byte for byte.
    #[arg(long, value_name = "FILE", conflicts_with = "manifest", global = true)]
    replay: Option<PathBuf>,

    /// Record this run (command, arguments, seed, version, elapsed ms).
    #[arg(long, value_name = "FILE", global = true)]
    manifest: Option<PathBuf>,

    /// Seed for randomized searches (oracle sampling).
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    seed: u64,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Family combinatorics: membership, maximality, decompositions.
    Family {
        #[command(subcommand)]
        cmd: FamilyCmd,
    },
    /// Exact norm of a vector, with the maximizing admissible set.
    Norm(VectorArgs),
    /// Unit sets and the sub-unit gap of a norm-one vector.
    Gap {
        #[command(subcommand)]
        cmd: GapCmd,
    },
    /// Extreme-point decisions with certificates either way.
    Extreme {
        #[command(subcommand)]
        cmd: ExtremeCmd,
    },
    /// Constructive convex decompositions of ball points.
    Lambda {
        #[command(subcommand)]
        cmd: LambdaCmd,
    },
    /// Dual-ball geometry at exponent 1.
    Dual {
        #[command(subcommand)]
        cmd: DualCmd,
    },
    /// Polyhedrality margin of a unit vector, with a dual witness.
    Margin(VectorArgs),
    /// Isometry-rigidity searches and certificate replays.
    Isometry {
        #[command(subcommand)]
        cmd: IsometryCmd,
    },
    /// Brute-force cross-checks; prints agreement tables.
    Oracle {
        /// Which table to run.
        #[arg(long, value_parser = ["families", "norms", "all"], default_value = "all")]
        check: String,
        /// Window for the family tables (all subsets of [1, window]).
        #[arg(long, default_value_t = 8)]
        window: u32,
        /// Sample count for the norm table.
        #[arg(long, default_value_t = 100)]
        samples: u32,
        /// Largest support size for sampled vectors.
        #[arg(long, default_value_t = 6)]
        support: u32,
        /// Largest denominator for sampled coordinates.
        #[arg(long, default_value_t = 4)]
        denom: u32,
        /// Worker threads; the output is independent of this.
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

#[derive(Args)]
struct VectorArgs {
    /// Family order: a nonnegative integer or "omega".
    #[arg(long)]
    order: String,
    /// Convexification exponent.
    #[arg(long, default_value_t = 1)]
    p: u32,
    /// Vector as JSON [[index, "a/b"], …].
    #[arg(long)]
    vector: String,
}

#[derive(Args)]
struct FunctionalArgs {
    /// Family order: a nonnegative integer or "omega".
    #[arg(long)]
    order: String,
    /// Functional as JSON {"coeffs": [[index, "a/b"], …]}.
    #[arg(long)]
    functional: String,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Is the set a member of the family?
    Member {
        #[arg(long)]
        order: String,
        /// Strictly increasing list, e.g. 2,3,7 (empty for ∅).
        #[arg(long, default_value = "")]
        set: String,
    },
    /// Is the member maximal (no larger element extends it)?
    Maximal {
        #[arg(long)]
        order: String,
        #[arg(long)]
        set: String,
    },
    /// Split a maximal set into consecutive maximal blocks k orders down.
    Decompose {
        /// Finite order n of the set.
        #[arg(long)]
        order: u32,
        /// Order n − k of the blocks, given by k.
        #[arg(long)]
        inner: u32,
        #[arg(long)]
        set: String,
    },
    /// Is F a spread of G (pointwise G ≤ F, equal sizes)?
    Spread {
        #[arg(long)]
        g: String,
        #[arg(long)]
        f: String,
    },
    /// Certify {j} ∪ F ∈ S_n by squeezing between G and its spread F.
    Squeeze {
        #[arg(long)]
        g: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        j: u32,
        /// Finite order n.
        #[arg(long)]
        order: u32,
    },
    /// Greedily extend a member to a maximal set with elements above a floor.
    Complete {
        #[arg(long)]
        order: String,
        #[arg(long)]
        set: String,
        #[arg(long)]
        floor: u32,
    },
    /// All members (or maximal members) within [1, window].
    Enumerate {
        #[arg(long)]
        order: String,
        #[arg(long)]
        window: u32,
        /// Keep only sets with no admissible extension inside ℕ.
        #[arg(long)]
        maximal_only: bool,
    },
}

#[derive(Subcommand)]
enum GapCmd {
    /// A_x and the zero-free unit sets of a norm-one vector.
    UnitSets(VectorArgs),
    /// The full gap report: ε_x plus the unit sets.
    Report(VectorArgs),
}

#[derive(Subcommand)]
enum ExtremeCmd {
    /// Decide extremality, with a certificate or an exact refutation.
    Check(VectorArgs),
    /// Signed-indicator rank on the support (p = 1 vertex test).
    Rank(VectorArgs),
    /// All extreme points on a window with bounded denominators.
    Enumerate {
        #[arg(long)]
        order: String,
        #[arg(long, default_value_t = 1)]
        p: u32,
        #[arg(long)]
        window: u32,
        /// Largest denominator in the rational grid.
        #[arg(long)]
        denom: u32,
    },
}

#[derive(Subcommand)]
enum LambdaCmd {
    /// The repeated-average vector ξ^n_m with its concentration bound.
    Average {
        /// Construction order n ≥ 1.
        #[arg(long)]
        n: u32,
        /// Starting index and per-level block count m ≥ 1.
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        p: u32,
    },
    /// Split off the windowed head at the first norm-preserving cut.
    Split(VectorArgs),
    /// Average the vector with its bumped nonmaximal-1-set sibling.
    Adjoin(VectorArgs),
    /// Push mass onto a covering set until it saturates at 1.
    Saturate(VectorArgs),
    /// The full uniform-λ pipeline with verified certificate.
    Decompose(VectorArgs),
    /// Carathéodory decomposition inside a window section.
    Caratheodory {
        #[arg(long)]
        order: String,
        #[arg(long, default_value_t = 1)]
        p: u32,
        #[arg(long)]
        window: u32,
        #[arg(long)]
        vector: String,
    },
}

#[derive(Subcommand)]
enum DualCmd {
    /// The dual norm with its exact primal maximizer.
    Norm(FunctionalArgs),
    /// A minimal-total representation over signed indicators.
    Represent(FunctionalArgs),
    /// Is the functional extreme in the dual ball?
    Extreme(FunctionalArgs),
    /// Split a norming functional as a midpoint of two dual extremes.
    Split(FunctionalArgs),
    /// Convex representation of a dual-ball point over extremes.
    Csrp(FunctionalArgs),
}

#[derive(Subcommand)]
enum IsometryCmd {
    /// Search for a vector whose exact norm changes under the candidate.
    Witness {
        #[arg(long)]
        order: String,
        /// Candidate as JSON {"perm": [[i, image], …], "signs": [[i, ±1], …]}.
        #[arg(long)]
        perm: String,
        /// Largest index the search may touch.
        #[arg(long, default_value_t = 12)]
        max_support: u32,
        /// Evaluation budget.
        #[arg(long, default_value_t = isometry::DEFAULT_SEARCH_BUDGET)]
        budget: u64,
    },
    /// Survey every signed permutation on a window.
    Lemmas {
        #[arg(long)]
        order: String,
        #[arg(long)]
        window: u32,
    },
    /// Replay the ladder certificate from k at order n.
    Blocks {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        /// Synthetic block lengths, e.g. 1,1,2 (last repeats; empty = unit).
        #[arg(long, default_value = "")]
        lengths: String,
    },
}

// ---------------------------------------------------------------------------
// Error plumbing

enum RunError {
    Usage(String),
    Core(Error),
}

impl From<UsageError> for RunError {
    fn from(e: UsageError) -> RunError {
        RunError::Usage(e.0)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> RunError {
        RunError::Core(e)
    }
}

type RunResult = Result<Value, RunError>;

/// The environment-level cap on window-shaped flags.
fn env_window_cap() -> Result<u32, RunError> {
    match std::env::var("SCHREIER_MAX_WINDOW") {
        Err(_) => Ok(DEFAULT_MAX_WINDOW),
        Ok(s) => s.parse::<u32>().map_err(|_| {
            RunError::Usage(format!(
                "SCHREIER_MAX_WINDOW must be a nonnegative integer, got {s:?}"
            ))
        }),
    }
}

/// Applies the environment-level window cap before touching the kernel.
fn check_window(window: u32) -> Result<(), RunError> {
    let cap = env_window_cap()?;
    if window > cap {
        return Err(RunError::Core(Error::WindowTooLarge {
            requested: window,
            limit: cap,
        }));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Dispatch

fn dispatch(cmd: &Command, seed: u64) -> RunResult {
    match cmd {
        Command::Family { cmd } => family(cmd),
        Command::Norm(args) => {
            let (x, alpha) = vector_input(args)?;
            let w = vectors::norm(&x, alpha);
            Ok(json!({ "value_p": json::rational(&w.value_p), "witness": json::index_set(&w.witness) }))
        }
        Command::Gap { cmd } => {
            let (args, full) = match cmd {
                GapCmd::UnitSets(a) => (a, false),
                GapCmd::Report(a) => (a, true),
            };
            let (x, alpha) = vector_input(args)?;
            let report = if full {
                vectors::epsilon_gap(&x, alpha)?
            } else {
                vectors::unit_sets(&x, alpha)?
            };
            Ok(json::gap_report(&report))
        }
        Command::Extreme { cmd } => extreme(cmd),
        Command::Lambda { cmd } => lambda_cmd(cmd),
        Command::Dual { cmd } => dual_cmd(cmd),
        Command::Margin(args) => {
            let (x, alpha) = vector_input(args)?;
            Ok(json::margin_report(&dual::vpoly_margin(&x, alpha)?))
        }
        Command::Isometry { cmd } => isometry_cmd(cmd),
        Command::Oracle {
            check,
            window,
            samples,
            support,
            denom,
            threads,
        } => {
            check_window(*window)?;
            oracle_tables(check, *window, *samples, *support, *denom, seed, *threads)
        }
    }
}

fn vector_input(args: &VectorArgs) -> Result<(SparseVector, OrderIndex), RunError> {
    let alpha = json::parse_order(&args.order)?;
    let x = json::parse_vector(args.p, &args.vector)?;
    Ok((x, alpha))
}

fn functional_input(args: &FunctionalArgs) -> Result<(dual::Functional, OrderIndex), RunError> {
    let alpha = json::parse_order(&args.order)?;
    let f = json::parse_functional(&args.functional)?;
    Ok((f, alpha))
}

fn family(cmd: &FamilyCmd) -> RunResult {
    match cmd {
        FamilyCmd::Member { order, set } => {
            let alpha = json::parse_order(order)?;
            let f = json::parse_index_set(set)?;
            Ok(json!({ "member": families::is_member(&f, alpha) }))
        }
        FamilyCmd::Maximal { order, set } => {
            let alpha = json::parse_order(order)?;
            let f = json::parse_index_set(set)?;
            Ok(json!({ "maximal": families::is_maximal(&f, alpha)? }))
        }
        FamilyCmd::Decompose { order, inner, set } => {
            let f = json::parse_index_set(set)?;
            let d = families::decompose_maximal(&f, *order, *inner)?;
            Ok(json::block_decomposition(&d))
        }
        FamilyCmd::Spread { g, f } => {
            let g = json::parse_index_set(g)?;
            let f = json::parse_index_set(f)?;
            Ok(json!({ "spread": families::is_spread(&g, &f) }))
        }
        FamilyCmd::Squeeze { g, f, j, order } => {
            let g = json::parse_index_set(g)?;
            let f = json::parse_index_set(f)?;
            let cert = families::squeeze_in(&g, &f, *j, *order)?;
            Ok(json!({ "set": json::index_set(cert.set()), "order": json::order(cert.order()) }))
        }
        FamilyCmd::Complete { order, set, floor } => {
            let alpha = json::parse_order(order)?;
            let f = json::parse_index_set(set)?;
            Ok(json!({ "set": json::index_set(&families::complete_to_maximal(&f, alpha, *floor)?) }))
        }
        FamilyCmd::Enumerate {
            order,
            window,
            maximal_only,
        } => {
            let cap = env_window_cap()?;
            let alpha = json::parse_order(order)?;
            let sets = families::enumerate_family_bounded(alpha, *window, *maximal_only, cap)?;
            Ok(json!({ "sets": json::index_sets(&sets) }))
        }
    }
}

fn extreme(cmd: &ExtremeCmd) -> RunResult {
    match cmd {
        ExtremeCmd::Check(args) => {
            let (x, alpha) = vector_input(args)?;
            let r = extremality::is_extreme(&x, alpha)?;
            Ok(json!({
                "extreme": r.extreme,
                "nonmaximal_unit_set": r.nonmaximal_unit_set.as_ref().map(json::index_set),
                "uncovered_index": r.uncovered_index,
                "rank": r.rank.map(|(rank, dim)| json!([rank, dim])),
                "refutation": r
                    .refutation
                    .as_ref()
                    .map(|(y, z)| json!([json::vector(y), json::vector(z)])),
            }))
        }
        ExtremeCmd::Rank(args) => {
            let (x, alpha) = vector_input(args)?;
            let (rank, dim) = extremality::vertex_rank_test(&x, alpha)?;
            Ok(json!({ "rank": rank, "support": dim }))
        }
        ExtremeCmd::Enumerate {
            order,
            p,
            window,
            denom,
        } => {
            check_window(*window)?;
            let alpha = json::parse_order(order)?;
            let points = extremality::enumerate_extreme(*p, alpha, *window, *denom)?;
            Ok(json!({ "vectors": points.iter().map(json::vector).collect::<Vec<Value>>() }))
        }
    }
}

fn lambda_cmd(cmd: &LambdaCmd) -> RunResult {
    match cmd {
        LambdaCmd::Average { n, m, p } => {
            Ok(json::averaged(&lambda::repeated_average(*n, *m, *p)?))
        }
        LambdaCmd::Split(args) => {
            let (x, alpha) = vector_input(args)?;
            let (x1, x2, cut) = lambda::split_tail(&x, alpha)?;
            Ok(json!({ "x1": json::vector(&x1), "x2": json::vector(&x2), "cut": cut }))
        }
        LambdaCmd::Adjoin(args) => {
            let (x, alpha) = vector_input(args)?;
            let (x1, x2) = lambda::adjoin_nonmaximal_oneset(&x, alpha)?;
            Ok(json!({ "x1": json::vector(&x1), "x2": json::vector(&x2) }))
        }
        LambdaCmd::Saturate(args) => {
            let (x, alpha) = vector_input(args)?;
            let (x1, x2) = lambda::saturate(&x, alpha)?;
            Ok(json!({ "x1": json::vector(&x1), "x2": json::radical_vector(&x2) }))
        }
        LambdaCmd::Decompose(args) => {
            let (x, alpha) = vector_input(args)?;
            Ok(json::decomp_cert(&lambda::lambda_decompose(&x, alpha)?))
        }
        LambdaCmd::Caratheodory {
            order,
            p,
            window,
            vector,
        } => {
            check_window(*window)?;
            let alpha = json::parse_order(order)?;
            let v = json::parse_vector(*p, vector)?;
            Ok(json::decomp_cert(&lambda::caratheodory_decompose(&v, alpha, *window)?))
        }
    }
}

fn dual_cmd(cmd: &DualCmd) -> RunResult {
    match cmd {
        DualCmd::Norm(args) => {
            let (f, alpha) = functional_input(args)?;
            let (value, maximizer) = dual::dual_norm(&f, alpha)?;
            Ok(json!({ "value": json::rational(&value), "maximizer": json::vector(&maximizer) }))
        }
        DualCmd::Represent(args) => {
            let (f, alpha) = functional_input(args)?;
            Ok(json::dual_rep(&dual::represent_in_ball(&f, alpha)?))
        }
        DualCmd::Extreme(args) => {
            let (f, alpha) = functional_input(args)?;
            Ok(json!({ "extreme": dual::is_dual_extreme(&f, alpha) }))
        }
        DualCmd::Split(args) => {
            let (f, alpha) = functional_input(args)?;
            let (g, h) = dual::dual_split(&f, alpha)?;
            Ok(json!({ "halves": [json::functional(&g), json::functional(&h)] }))
        }
        DualCmd::Csrp(args) => {
            let (f, alpha) = functional_input(args)?;
            Ok(json::dual_rep(&dual::dual_csrp(&f, alpha)?))
        }
    }
}

fn isometry_cmd(cmd: &IsometryCmd) -> RunResult {
    match cmd {
        IsometryCmd::Witness {
            order,
            perm,
            max_support,
            budget,
        } => {
            // The search support is a window in substance, so the same cap
            // applies.
            check_window(*max_support)?;
            let alpha = json::parse_order(order)?;
            let u = json::parse_signed_perm(perm)?;
            Ok(match isometry::find_witness(&u, alpha, *max_support, *budget) {
                WitnessSearch::Found(w) => json!({
                    "found": true,
                    "vector": json::vector(&w.vector),
                    "norm_before": json::rational(&w.norm_before),
                    "norm_after": json::rational(&w.norm_after),
                }),
                WitnessSearch::NotFound {
                    evaluations,
                    guaranteed,
                } => json!({
                    "found": false,
                    "evaluations": evaluations,
                    "guaranteed": guaranteed,
                }),
            })
        }
        IsometryCmd::Lemmas { order, window } => {
            check_window(*window)?;
            let alpha = json::parse_order(order)?;
            let checks = isometry::lemma_checks(alpha, *window)?;
            let survivors = checks.iter().filter(|c| c.survived).count();
            Ok(json!({
                "candidates": checks.len(),
                "survivors": survivors,
                "checks": checks
                    .iter()
                    .map(|c| {
                        json!({
                            "label": &c.label,
                            "survived": c.survived,
                            "pure_sign_flip": c.pure_sign_flip,
                            "fixes_first": c.fixes_first,
                            "consistent": c.consistent,
                        })
                    })
                    .collect::<Vec<Value>>(),
            }))
        }
        IsometryCmd::Blocks { k, n, lengths } => {
            let lens = json::parse_lengths(lengths)?;
            let cert = isometry::proof_blocks(*k, *n, &lens)?;
            Ok(json!({
                "k": cert.k,
                "n": cert.n,
                "d": cert.d,
                "k_seq": cert.k_seq,
                "blocks": cert
                    .blocks
                    .iter()
                    .map(|b| json!({ "f": json::index_set(&b.f), "z_support": json::index_set(&b.z_support) }))
                    .collect::<Vec<Value>>(),
                "checks": cert
                    .checks
                    .iter()
                    .map(|c| json!({ "name": &c.name, "pass": c.pass }))
                    .collect::<Vec<Value>>(),
                "verified": cert.verify(),
            }))
        }
    }
}

// ---------------------------------------------------------------------------
// Oracle tables

struct Table {
    name: &'static str,
    cases: u64,
    disagreements: u64,
}

impl Table {
    fn json(&self) -> Value {
        json!({
            "name": self.name,
            "cases": self.cases,
            "disagreements": self.disagreements,
            "pass": self.disagreements == 0,
        })
    }
}

const ORACLE_ORDERS: [OrderIndex; 5] = [
    OrderIndex::Finite(0),
    OrderIndex::Finite(1),
    OrderIndex::Finite(2),
    OrderIndex::Finite(3),
    OrderIndex::Omega,
];

fn family_tables(window: u32) -> Vec<Table> {
    let subsets = oracle::all_subsets(window);
    let (membership, maximality, regularity) = subsets
        .par_iter()
        .map(|elems| {
            let set = families::IndexSet::new(elems.clone()).expect("subsets are sorted");
            let mut membership = (0u64, 0u64);
            let mut maximality = (0u64, 0u64);
            let mut regularity = (0u64, 0u64);
            for alpha in ORACLE_ORDERS {
                let brute = oracle::member_brute(elems, alpha);
                membership.0 += 1;
                membership.1 += u64::from(families::is_member(&set, alpha) != brute);
                if let Some(brute_max) = oracle::maximal_brute(&set, alpha, window) {
                    maximality.0 += 1;
                    let fast = families::is_maximal(&set, alpha).expect("member by oracle");
                    maximality.1 += u64::from(fast != brute_max);
                }
                if !brute {
                    continue;
                }
                // Hereditary, spreading, and the nesting into the next order.
                for skip in 0..elems.len() {
                    let mut sub = elems.clone();
                    sub.remove(skip);
                    regularity.0 += 1;
                    regularity.1 += u64::from(!oracle::member_brute(&sub, alpha));
                }
                for at in 0..elems.len() {
                    let mut spread = elems.clone();
                    spread[at] += 1;
                    if at + 1 < spread.len() && spread[at] == spread[at + 1] {
                        continue;
                    }
                    regularity.0 += 1;
                    regularity.1 += u64::from(!oracle::member_brute(&spread, alpha));
                }
                if let OrderIndex::Finite(n) = alpha {
                    regularity.0 += 1;
                    regularity.1 +=
                        u64::from(!oracle::member_brute(elems, OrderIndex::Finite(n + 1)));
                }
            }
            (membership, maximality, regularity)
        })
        .reduce(
            || ((0, 0), (0, 0), (0, 0)),
            |a, b| {
                (
                    (a.0 .0 + b.0 .0, a.0 .1 + b.0 .1),
                    (a.1 .0 + b.1 .0, a.1 .1 + b.1 .1),
                    (a.2 .0 + b.2 .0, a.2 .1 + b.2 .1),
                )
            },
        );
    vec![
        Table {
            name: "family membership",
            cases: membership.0,
            disagreements: membership.1,
        },
        Table {
            name: "family maximality",
            cases: maximality.0,
            disagreements: maximality.1,
        },
        Table {
            name: "family regularity",
            cases: regularity.0,
            disagreements: regularity.1,
        },
    ]
}

/// A reproducible corpus of exact rational vectors: support sizes in
/// `[1, support]`, indices in `[1, 2·support]`, coordinates `k/d` with
/// `k ∈ [−2·denom, 2·denom] \ {0}` and `d ∈ [1, denom]`.
fn sample_vectors(samples: u32, support: u32, denom: u32, seed: u64) -> Vec<SparseVector> {
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(samples as usize);
    for trial in 0..samples {
        let p = if trial % 2 == 0 { 1 } else { 2 };
        let size = 1 + rng.next_below(u64::from(support)) as u32;
        let mut indices: Vec<u32> = Vec::new();
        while (indices.len() as u32) < size {
            let i = 1 + rng.next_below(u64::from(2 * support)) as u32;
            if !indices.contains(&i) {
                indices.push(i);
            }
        }
        indices.sort_unstable();
        let values: Vec<(u32, BigRational)> = indices
            .into_iter()
            .map(|i| {
                let span = i64::from(2 * denom);
                let mut num = -span + rng.next_below(2 * span as u64) as i64;
                if num >= 0 {
                    num += 1;
                }
                let den = 1 + rng.next_below(u64::from(denom)) as i64;
                (i, BigRational::new(num.into(), den.into()))
            })
            .collect();
        out.push(SparseVector::from_values(p, values).expect("sampled indices are distinct"));
    }
    out
}

fn norm_table(samples: u32, support: u32, denom: u32, seed: u64) -> Table {
    let corpus = sample_vectors(samples, support, denom, seed);
    let (cases, disagreements) = corpus
        .par_iter()
        .enumerate()
        .map(|(at, x)| {
            let alpha = ORACLE_ORDERS[1 + at % 4];
            let masses: Vec<(u32, BigRational)> =
                x.entries().map(|(i, s)| (i, s.mag_p().clone())).collect();
            let fast = vectors::norm(x, alpha);
            let (brute, _) = oracle::norm_brute(&masses, alpha);
            let agree = fast.value_p == brute && fast.certifies(x, alpha);
            (1u64, u64::from(!agree))
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Table {
        name: "norm values",
        cases,
        disagreements,
    }
}

fn oracle_tables(
    check: &str,
    window: u32,
    samples: u32,
    support: u32,
    denom: u32,
    seed: u64,
    threads: usize,
) -> RunResult {
    if window > 12 {
        return Err(RunError::Core(Error::WindowTooLarge {
            requested: window,
            limit: 12,
        }));
    }
    if support > 8 {
        return Err(RunError::Usage(String::from(
            "oracle --support is capped at 8 (the brute norm is exponential)",
        )));
    }
    if denom == 0 {
        return Err(RunError::Usage(String::from("oracle --denom must be positive")));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| RunError::Usage(format!("thread pool: {e}")))?;
    let tables: Vec<Table> = pool.install(|| {
        let mut tables = Vec::new();
        if check == "families" || check == "all" {
            tables.extend(family_tables(window));
        }
        if check == "norms" || check == "all" {
            tables.push(norm_table(samples, support, denom, seed));
        }
        tables
    });
    let pass = tables.iter().all(|t| t.disagreements == 0);
    Ok(json!({
        "tables": tables.iter().map(Table::json).collect::<Vec<Value>>(),
        "pass": pass,
    }))
}

// ---------------------------------------------------------------------------
// Manifest and replay

/// The recorded arguments: everything after the binary name, minus the
/// manifest/replay plumbing itself.
fn recorded_arguments() -> Vec<String> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut out = Vec::with_capacity(args.len());
    let mut skip_value = false;
    for arg in args {
        if skip_value {
            skip_value = false;
            continue;
        }
        if arg == "--manifest" || arg == "--replay" {
            skip_value = true;
            continue;
        }
        if arg.starts_with("--manifest=") || arg.starts_with("--replay=") {
            continue;
        }
        out.push(arg);
    }
    out
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Family { .. } => "family",
        Command::Norm(_) => "norm",
        Command::Gap { .. } => "gap",
        Command::Extreme { .. } => "extreme",
        Command::Lambda { .. } => "lambda",
        Command::Dual { .. } => "dual",
        Command::Margin(_) => "margin",
        Command::Isometry { .. } => "isometry",
        Command::Oracle { .. } => "oracle",
    }
}

fn write_manifest(path: &PathBuf, cmd: &Command, seed: u64, elapsed_ms: u128) -> Result<(), RunError> {
    let manifest = json!({
        "command": command_name(cmd),
        "arguments": recorded_arguments(),
        "seed": seed,
        "version": env!("CARGO_PKG_VERSION"),
        "elapsed_ms": elapsed_ms,
    });
    fs::write(path, format!("{manifest}\n"))
        .map_err(|e| RunError::Usage(format!("cannot write manifest {}: {e}", path.display())))
}

fn replayed_cli(path: &PathBuf) -> Result<Cli, RunError> {
    let text = fs::read_to_string(path)
        .map_err(|e| RunError::Usage(format!("cannot read manifest {}: {e}", path.display())))?;
    let manifest: Value = serde_json::from_str(&text)
        .map_err(|e| RunError::Usage(format!("manifest is not valid JSON: {e}")))?;
    let arguments = manifest
        .get("arguments")
        .and_then(Value::as_array)
        .ok_or_else(|| RunError::Usage(String::from("manifest has no arguments list")))?
        .iter()
        .map(|v| {
            v.as_str()
                .map(String::from)
                .ok_or_else(|| RunError::Usage(String::from("manifest arguments must be strings")))
        })
        .collect::<Result<Vec<String>, RunError>>()?;
    let argv = std::iter::once(String::from("schreier")).chain(arguments);
    let cli = Cli::try_parse_from(argv)
        .map_err(|e| RunError::Usage(format!("manifest replays invalid arguments: {e}")))?;
    if cli.replay.is_some() || cli.manifest.is_some() {
        return Err(RunError::Usage(String::from(
            "manifest arguments may not contain --replay or --manifest",
        )));
    }
    Ok(cli)
}

// ---------------------------------------------------------------------------
// Entry

fn run() -> Result<Value, RunError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                return Err(RunError::Usage(e.to_string()));
            }
            // --help / --version land here; clap formats them for stdout.
            print!("{e}");
            std::process::exit(0);
        }
    };
    let cli = if let Some(path) = &cli.replay {
        replayed_cli(path)?
    } else {
        cli
    };
    let Some(command) = &cli.command else {
        let help = Cli::command().render_usage();
        return Err(RunError::Usage(format!("a subcommand is required\n{help}")));
    };
    let start = Instant::now();
    let value = dispatch(command, cli.seed)?;
    let elapsed_ms = start.elapsed().as_millis();
    if let Some(path) = &cli.manifest {
        write_manifest(path, command, cli.seed, elapsed_ms)?;
    }
    Ok(value)
}

fn main() -> ExitCode {
    match run() {
        Ok(value) => {
            println!("{value}");
            ExitCode::SUCCESS
        }
        Err(RunError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(RunError::Core(e)) => {
            eprintln!("error: {e}");
            if e.is_guard() {
                ExitCode::from(EXIT_GUARD)
            } else {
                ExitCode::from(EXIT_PRECONDITION)
            }
        }
    }
}
