//! The `kl` command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 invariant violated.
//! JSON output is an envelope `{"command", "ok", "result"}` described by
//! `schema/report.schema.json`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cache::KkStore;
use crate::complex::PipeComplex;
use crate::error::{KlError, Result};
use crate::ideal::{self, Entry, MinorOptions, SpecializedMatrix, DEFAULT_BUDGET};
use crate::ktheory::{self, AscentChoice, KostantKumar};
use crate::mult::{self, GammaMode, PairRecord};
use crate::perm::{self, bruhat_leq, canonical_labeling, Cell, Permutation};
use crate::pipedreams::{enumerate_pipes, flatten};
use crate::poly::{Polynomial, TermOrder, Var};
use crate::sampler::{self, TrialConfig};

/// Largest `n` accepted by sweeps and sampling without `--allow-large`.
pub const LARGE_N: usize = 7;

#[derive(Parser, Debug)]
#[command(name = "kl", version, about = "Kazhdan-Lusztig ideals, pipe dreams and Schubert multiplicities")]
pub struct Cli {
    /// Output rendering.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for sweeps; defaults to available parallelism.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// S-pair budget for Buchberger checks.
    #[arg(long, global = true, env = "KL_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Plain ASCII figures.
    #[arg(long, global = true)]
    pub ascii: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    KlLex,
    Diagonal,
    GradedKlLex,
}

impl From<OrderArg> for TermOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::KlLex => TermOrder::KlLex,
            OrderArg::Diagonal => TermOrder::Diagonal,
            OrderArg::GradedKlLex => TermOrder::GradedKlLex,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Pair {
    pub v: Permutation,
    pub w: Permutation,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rothe diagram with canonical labels.
    Diagram { v: Permutation },
    /// Essential set and rank conditions.
    Essential { w: Permutation },
    /// The specialized matrix Z^(v).
    Matrix { v: Permutation },
    /// Generators of I_{v,w}.
    Minors {
        #[command(flatten)]
        pair: Pair,
        /// Use every rank condition, not only the essential set.
        #[arg(long)]
        all_minors: bool,
        #[arg(long, value_enum, default_value_t = OrderArg::KlLex)]
        order: OrderArg,
    },
    /// Buchberger's criterion for one pair or a whole sweep.
    Groebner {
        v: Option<Permutation>,
        w: Option<Permutation>,
        /// Sweep every strict pair of S_n.
        #[arg(long, requires = "n")]
        all: bool,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        all_minors: bool,
        #[arg(long, value_enum, default_value_t = OrderArg::KlLex)]
        order: OrderArg,
        #[arg(long)]
        allow_large: bool,
    },
    /// Leading-term ideal, its primes and the pipe complex.
    Initial {
        #[command(flatten)]
        pair: Pair,
    },
    /// The pipe complex of (v, w).
    Complex {
        #[command(flatten)]
        pair: Pair,
        /// Facet adjacency graph in DOT.
        #[arg(long)]
        dot: bool,
    },
    /// Pipe dreams on D(v) with Demazure product TARGET.
    Pipes {
        v: Permutation,
        target: Permutation,
        #[arg(long)]
        reduced: bool,
        /// Draw strands instead of crosses.
        #[arg(long)]
        strands: bool,
    },
    /// Unspecialized Grothendieck polynomial.
    Gpoly {
        #[command(flatten)]
        pair: Pair,
    },
    /// Unspecialized Schubert polynomial.
    Spoly {
        #[command(flatten)]
        pair: Pair,
    },
    /// Double Schubert or Grothendieck polynomial.
    Double {
        w: Permutation,
        #[arg(long)]
        grothendieck: bool,
        /// Compare with divided differences.
        #[arg(long)]
        check: bool,
    },
    /// Compare the specializations of the K-polynomial and multidegree.
    Specialize {
        #[command(flatten)]
        pair: Pair,
    },
    /// Kostant-Kumar recursion.
    Kk {
        #[command(flatten)]
        pair: Pair,
        /// Persist results in DIR/kostant_kumar.jsonl.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[arg(long)]
        first_ascent: bool,
    },
    /// Multiplicity of X_w at e_v.
    Mult {
        #[command(flatten)]
        pair: Pair,
        /// Run every applicable route and compare.
        #[arg(long)]
        all_routes: bool,
    },
    /// Parabolic maximal representative.
    Vmax {
        #[command(flatten)]
        pair: Pair,
    },
    /// Standard-grading homogeneity of I_{v,w}.
    Homog {
        #[command(flatten)]
        pair: Pair,
    },
    /// Route statistics over strict pairs of S_n.
    Gamma {
        #[arg(long)]
        n: usize,
        /// Sample this many pairs instead of sweeping.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-pair CSV.
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        allow_large: bool,
    },
    /// Monte Carlo success estimate.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        allow_large: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Diagram { .. } => "diagram",
            Command::Essential { .. } => "essential",
            Command::Matrix { .. } => "matrix",
            Command::Minors { .. } => "minors",
            Command::Groebner { .. } => "groebner",
            Command::Initial { .. } => "initial",
            Command::Complex { .. } => "complex",
            Command::Pipes { .. } => "pipes",
            Command::Gpoly { .. } => "gpoly",
            Command::Spoly { .. } => "spoly",
            Command::Double { .. } => "double",
            Command::Specialize { .. } => "specialize",
            Command::Kk { .. } => "kk",
            Command::Mult { .. } => "mult",
            Command::Vmax { .. } => "vmax",
            Command::Homog { .. } => "homog",
            Command::Gamma { .. } => "gamma",
            Command::Sample { .. } => "sample",
        }
    }
}

/// Rendered result of one command.
struct Outcome {
    json: Value,
    text: String,
    /// A theorem-level check came out false.
    violated: bool,
}

impl Outcome {
    fn ok(json: Value, text: String) -> Self {
        Self { json, text, violated: false }
    }
}

struct Ctx {
    budget: u64,
    ascii: bool,
}

fn exit_code(e: &KlError) -> i32 {
    match e {
        KlError::Invariant(_) => 3,
        KlError::Io(_) => 1,
        _ => 2,
    }
}

fn usage(msg: impl Into<String>) -> KlError {
    KlError::Parse(msg.into())
}

fn same_size(v: &Permutation, w: &Permutation) -> Result<()> {
    if v.n() != w.n() {
        return Err(KlError::SizeMismatch { left: v.n(), right: w.n() });
    }
    Ok(())
}

fn below(v: &Permutation, w: &Permutation) -> Result<()> {
    if !bruhat_leq(v, w)? {
        return Err(KlError::NotBelow { v: *v, w: *w });
    }
    Ok(())
}

fn cells_json(cells: &[Cell]) -> Value {
    json!(cells.iter().map(|c| [c.row(), c.col()]).collect::<Vec<_>>())
}

fn cells_text(cells: &[Cell]) -> String {
    let s: Vec<String> = cells.iter().map(|c| c.to_string()).collect();
    format!("{{{}}}", s.join(", "))
}

fn poly_json(p: &Polynomial) -> Value {
    json!({ "expr": p.to_string(), "terms": p.to_json() })
}

fn gamma_name(ascii: bool, n: usize) -> String {
    if ascii {
        format!("Gamma_{n}")
    } else {
        format!("Γ_{n}")
    }
}

fn check_large(n: usize, allow: bool) -> Result<()> {
    if n > LARGE_N && !allow {
        return Err(usage(format!("n = {n} exceeds {LARGE_N}; pass --allow-large to run it anyway")));
    }
    Ok(())
}

fn diagram(ctx: &Ctx, v: &Permutation) -> Outcome {
    let n = v.n();
    let labels = canonical_labeling(v);
    let width = labels.iter().map(|(_, l)| l.to_string().len()).max().unwrap_or(1);
    let (dot, empty) = if ctx.ascii { ("*", ".") } else { ("●", "·") };
    let mut rows = Vec::new();
    for i in (1..=n).rev() {
        let cells: Vec<String> = (1..=n)
            .map(|j| {
                let s = if n + 1 - v.at(j) == i {
                    dot.to_string()
                } else if let Some((_, l)) = labels.iter().find(|(c, _)| *c == Cell::new(i, j)) {
                    l.to_string()
                } else {
                    empty.to_string()
                };
                format!("{s:>width$}")
            })
            .collect();
        rows.push(format!("{i:>2} | {}", cells.join(" ")).trim_end().to_string());
    }
    let mut foot = String::from("     ");
    for j in 1..=n {
        let _ = write!(foot, "{j:>width$} ");
    }
    let ess = perm::essential_set(v);
    let word = perm::canonical_word(v);
    let mut text = format!("D({v}), {} boxes\n", labels.len());
    for r in &rows {
        let _ = writeln!(text, "{r}");
    }
    let _ = writeln!(text, "{}", foot.trim_end());
    let _ = writeln!(text, "essential set: {}", cells_text(&ess));
    let _ = writeln!(text, "canonical word: {word:?}");
    let json = json!({
        "v": v,
        "n": n,
        "boxes": labels.iter().map(|(c, l)| json!({"row": c.row(), "col": c.col(), "label": l})).collect::<Vec<_>>(),
        "essential": cells_json(&ess),
        "word": word,
        "rows": rows,
    });
    Outcome::ok(json, text)
}

fn essential(w: &Permutation) -> Outcome {
    let r = perm::rank_matrix(w);
    let ess = perm::essential_set(w);
    let mut text = format!("rank matrix of {w}\n{r}essential set:\n");
    for c in &ess {
        let _ = writeln!(text, "  {c}  rank {}", r.get(c.row(), c.col()));
    }
    let json = json!({
        "w": w,
        "rank_matrix": r.display_rows(),
        "essential": ess.iter().map(|c| json!({"row": c.row(), "col": c.col(), "rank": r.get(c.row(), c.col())})).collect::<Vec<_>>(),
    });
    Outcome::ok(json, text)
}

fn matrix(v: &Permutation) -> Outcome {
    let z = SpecializedMatrix::new(v);
    let n = v.n();
    let rows: Vec<Vec<String>> = (1..=n)
        .rev()
        .map(|i| {
            (1..=n)
                .map(|j| match z.get(i, j) {
                    Entry::Zero => "0".to_string(),
                    Entry::One => "1".to_string(),
                    Entry::Var(c) => Var::z(c.row(), c.col()).to_string(),
                })
                .collect()
        })
        .collect();
    let text = format!("Z^({v})\n{}", z.render());
    Outcome::ok(json!({ "v": v, "rows": rows, "variables": z.free_cells().len() }), text)
}

fn minors(v: &Permutation, w: &Permutation, all_minors: bool, order: OrderArg) -> Result<Outcome> {
    same_size(v, w)?;
    below(v, w)?;
    let g = ideal::essential_minors_with(v, w, MinorOptions { order: order.into(), all_minors, keep_records: true })?;
    let polys = g.polynomials();
    let mut text = String::new();
    for r in &g.records {
        let _ = writeln!(text, "{} rows {:?} cols {:?}: {}", r.source, r.rows, r.cols, r.value);
    }
    let _ = writeln!(
        text,
        "{} generators ({} zero minors, {} duplicates)",
        polys.len(),
        g.zero_minors,
        g.duplicates
    );
    for p in &polys {
        let _ = writeln!(text, "  {p}");
    }
    let json = json!({
        "v": v,
        "w": w,
        "order": format!("{:?}", g.order),
        "all_minors": all_minors,
        "generators": polys.iter().map(poly_json).collect::<Vec<_>>(),
        "zero_minors": g.zero_minors,
        "duplicates": g.duplicates,
        "records": g.records.iter().map(|r| json!({
            "source": [r.source.row(), r.source.col()],
            "rows": r.rows,
            "cols": r.cols,
            "value": r.value.to_string(),
        })).collect::<Vec<_>>(),
    });
    Ok(Outcome::ok(json, text))
}

fn groebner_pair(ctx: &Ctx, v: &Permutation, w: &Permutation, opts: MinorOptions) -> Result<Outcome> {
    same_size(v, w)?;
    below(v, w)?;
    let g = ideal::essential_minors_with(v, w, opts)?;
    let rep = g.buchberger_verify(ctx.budget)?;
    let basis = g.interreduced_polynomials();
    let mut text = format!(
        "{v} {w}: {} generators, {} S-pairs checked, {} skipped\n",
        rep.generators, rep.spairs_checked, rep.spairs_skipped
    );
    if rep.is_groebner {
        let _ = writeln!(text, "Groebner basis: yes\nreduced basis:");
    } else {
        let _ = writeln!(text, "Groebner basis: NO (theory violated)\nreduced basis:");
    }
    for p in &basis {
        let _ = writeln!(text, "  {p}");
    }
    let json = json!({
        "v": v,
        "w": w,
        "order": format!("{:?}", g.order),
        "is_groebner": rep.is_groebner,
        "spairs_checked": rep.spairs_checked,
        "spairs_skipped": rep.spairs_skipped,
        "generators": rep.generators,
        "reduced_basis": basis.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    });
    Ok(Outcome { json, text, violated: !rep.is_groebner })
}

fn groebner_sweep(ctx: &Ctx, n: usize, opts: MinorOptions, allow_large: bool) -> Result<Outcome> {
    if n < 2 {
        return Err(usage("sweeps need n >= 2"));
    }
    check_large(n, allow_large)?;
    let pairs = mult::gamma(n);
    let budget = ctx.budget;
    let results: Vec<(Permutation, Permutation, Result<bool>)> = pairs
        .par_iter()
        .map(|(v, w)| {
            let r = ideal::essential_minors_with(v, w, opts)
                .and_then(|g| g.buchberger_verify(budget))
                .map(|r| r.is_groebner);
            (*v, *w, r)
        })
        .collect();
    let failures: Vec<Value> = results
        .iter()
        .filter(|(_, _, r)| matches!(r, Ok(false)))
        .map(|(v, w, _)| json!({"v": v, "w": w}))
        .collect();
    let errors: Vec<Value> = results
        .iter()
        .filter_map(|(v, w, r)| r.as_ref().err().map(|e| json!({"v": v, "w": w, "error": e.to_string()})))
        .collect();
    let verified = results.iter().filter(|(_, _, r)| matches!(r, Ok(true))).count();
    let g = gamma_name(ctx.ascii, n);
    let gb = if ctx.ascii { "Groebner" } else { "Gröbner" };
    let mut text = if failures.is_empty() && errors.is_empty() {
        format!("all {g} pairs {gb}-verified ({} pairs)\n", pairs.len())
    } else {
        format!(
            "{verified} of {} {g} pairs {gb}-verified; {} failures, {} errors\n",
            pairs.len(),
            failures.len(),
            errors.len()
        )
    };
    for f in failures.iter().chain(&errors) {
        let _ = writeln!(text, "  {f}");
    }
    let json = json!({
        "n": n,
        "order": format!("{:?}", opts.order),
        "pairs": pairs.len(),
        "verified": verified,
        "failures": failures,
        "errors": errors,
    });
    Ok(Outcome { violated: !failures.is_empty(), json, text })
}

fn initial(ctx: &Ctx, v: &Permutation, w: &Permutation) -> Result<Outcome> {
    same_size(v, w)?;
    below(v, w)?;
    let rep = ideal::check_initial_ideal(v, w, ctx.budget)?;
    let g = ideal::essential_minors(v, w)?;
    let (j, primes) = match g.leading_term_ideal() {
        Ok(j) => {
            let p = j.minimal_primes();
            (Some(j), p)
        }
        Err(_) => (None, Vec::new()),
    };
    let mut text = String::new();
    if let Some(j) = &j {
        let _ = writeln!(text, "in(I) = {}", j.render());
    }
    let _ = writeln!(text, "minimal primes ({}):", primes.len());
    for p in &primes {
        let _ = writeln!(text, "  {}", cells_text(p));
    }
    let _ = writeln!(
        text,
        "groebner {} squarefree {} primes = reduced pipe dreams {} = Stanley-Reisner {}",
        rep.groebner, rep.squarefree, rep.primes_match_redpipes, rep.stanley_reisner_matches
    );
    let json = json!({
        "v": v,
        "w": w,
        "leading_ideal": j.as_ref().map(|j| j.generators.iter().map(|g| cells_json(g)).collect::<Vec<_>>()),
        "primes": primes.iter().map(|p| cells_json(p)).collect::<Vec<_>>(),
        "groebner": rep.groebner,
        "squarefree": rep.squarefree,
        "primes_match_redpipes": rep.primes_match_redpipes,
        "stanley_reisner_matches": rep.stanley_reisner_matches,
    });
    Ok(Outcome { violated: !rep.ok(), json, text })
}

fn complex(v: &Permutation, w: &Permutation, dot: bool) -> Result<Outcome> {
    same_size(v, w)?;
    below(v, w)?;
    let c = PipeComplex::new(v, w)?;
    let topo = c.topology_check()?;
    let facets = c.facets();
    let interior = c.interior_faces();
    let mut text = String::new();
    if dot {
        text.push_str(&c.to_dot());
    } else {
        let _ = writeln!(text, "pipe complex of ({v}, {w}) on {} vertices", c.num_vertices());
        let _ = writeln!(text, "{} facets:", facets.len());
        for f in &facets {
            let _ = writeln!(text, "  {}", cells_text(&f.vertices));
        }
        let _ = writeln!(text, "{} interior faces:", interior.len());
        for f in &interior {
            let _ = writeln!(text, "  {}", cells_text(&f.vertices));
        }
        let _ = writeln!(
            text,
            "f-vector {:?}, {:?} of dimension {}",
            topo.f_vector, topo.kind, topo.dimension
        );
    }
    let mut json = c.to_json();
    json["vertices"] = cells_json(c.vertices());
    json["interior_faces"] = json!(interior.iter().map(|f| cells_json(&f.vertices)).collect::<Vec<_>>());
    json["topology"] = serde_json::to_value(&topo)?;
    if dot {
        json["dot"] = json!(c.to_dot());
    }
    Ok(Outcome::ok(json, text))
}

fn pipes(ctx: &Ctx, v: &Permutation, target: &Permutation, reduced: bool, strands: bool) -> Result<Outcome> {
    same_size(v, target)?;
    let dreams = enumerate_pipes(v, target, reduced)?;
    let kind = if reduced { "reduced pipe dreams" } else { "pipe dreams" };
    let mut text = format!("{} {kind} on D({v}) with product {target}\n", dreams.len());
    for (k, d) in dreams.iter().enumerate() {
        let _ = writeln!(text, "#{} crosses {} word {:?}", k + 1, cells_text(&d.crosses), d.word());
        if strands && d.is_reduced() {
            text.push_str(&flatten(d)?.render(ctx.ascii));
        } else {
            text.push_str(&d.render(ctx.ascii));
        }
    }
    let json = json!({
        "v": v,
        "target": target,
        "reduced_only": reduced,
        "count": dreams.len(),
        "dreams": dreams.iter().map(|d| json!({
            "crosses": cells_json(&d.crosses),
            "word": d.word(),
            "reduced": d.is_reduced(),
        })).collect::<Vec<_>>(),
    });
    Ok(Outcome::ok(json, text))
}

fn unspecialized(v: &Permutation, w: &Permutation, groth: bool) -> Result<Outcome> {
    same_size(v, w)?;
    below(v, w)?;
    let (p, family) = if groth {
        (ktheory::unspecialized_grothendieck(v, w)?, "grothendieck")
    } else {
        (ktheory::unspecialized_schubert(v, w)?, "schubert")
    };
    let mut json = json!({ "v": v, "w": w, "family": family, "polynomial": poly_json(&p) });
    let mut text = format!("{p}\n");
    if groth {
        let f = ktheory::grothendieck_product_form(v, w)?;
        let _ = writeln!(text, "= {f}");
        json["product_form"] = json!(f);
    }
    Ok(Outcome::ok(json, text))
}

fn double(w: &Permutation, groth: bool, check: bool) -> Result<Outcome> {
    let p = if groth { ktheory::double_grothendieck(w)? } else { ktheory::double_schubert(w)? };
    let family = if groth { "grothendieck" } else { "schubert" };
    let mut json = json!({ "w": w, "family": family, "polynomial": poly_json(&p) });
    let mut text = format!("{p}\n");
    let mut violated = false;
    if check {
        let agrees = ktheory::divided_difference_oracle(w, groth) == p;
        violated = !agrees;
        json["oracle_agrees"] = json!(agrees);
        let _ = writeln!(text, "divided differences agree: {agrees}");
    }
    Ok(Outcome { json, text, violated })
}

fn specialize(v: &Permutation, w: &Permutation) -> Result<Outcome> {
    same_size(v, w)?;
    let r = ktheory::specialize_buch_rimanyi(v, w)?;
    let bad = r.disagreements();
    let mut text = format!("K-polynomial {}\nmultidegree {}\n", r.groth_double, r.schub_double);
    if bad.is_empty() {
        text.push_str("all specializations agree\n");
    } else {
        let _ = writeln!(text, "disagreements: {}", bad.join(", "));
    }
    let json = json!({
        "v": v,
        "w": w,
        "agree": bad.is_empty(),
        "disagreements": bad,
        "kpoly": {
            "double": r.groth_double.to_string(),
            "kostant_kumar": r.groth_kk.to_string(),
            "complex": r.groth_complex.to_string(),
            "unspecialized": r.groth_unspecialized.to_string(),
        },
        "multidegree": {
            "double": r.schub_double.to_string(),
            "kostant_kumar": r.schub_kk.to_string(),
            "complex": r.schub_complex.to_string(),
            "unspecialized": r.schub_unspecialized.to_string(),
        },
    });
    Ok(Outcome { violated: !bad.is_empty(), json, text })
}

fn kk(v: &Permutation, w: &Permutation, cache_dir: Option<&PathBuf>, first: bool) -> Result<Outcome> {
    same_size(v, w)?;
    below(v, w)?;
    let local;
    let table: &KostantKumar = if first {
        local = KostantKumar::new(AscentChoice::First);
        &local
    } else {
        ktheory::kostant_kumar_cache()
    };
    let store = cache_dir.map(|d| KkStore::new(d)).transpose()?;
    let loaded = match &store {
        Some(s) => s.load_into(table)?,
        None => 0,
    };
    let hit = table.lookup(v, w).is_some();
    let value = table.get(v, w)?;
    let saved = match &store {
        Some(s) => Some(s.save(table)?),
        None => None,
    };
    let mut json = json!({
        "v": v,
        "w": w,
        "ascent": if first { "first" } else { "last" },
        "value": poly_json(&value),
    });
    let mut text = format!("{value}\n");
    if let Some(s) = &store {
        json["cache"] = json!({
            "path": s.path().display().to_string(),
            "loaded": loaded,
            "saved": saved,
            "hit": hit,
        });
        let _ = writeln!(text, "cache {}: loaded {loaded}, saved {}, hit {hit}", s.path().display(), saved.unwrap_or(0));
    }
    Ok(Outcome::ok(json, text))
}

fn mult_cmd(v: &Permutation, w: &Permutation, all_routes: bool) -> Result<Outcome> {
    same_size(v, w)?;
    let m = mult::multiplicity(v, w)?;
    let cg = mult::cograssmannian_route(v, w)?;
    let mut text = match m.value {
        Some(x) => format!("mult = {x} via {}\n", m.route),
        None => "mult unresolved\n".to_string(),
    };
    let _ = writeln!(text, "homogeneous: {}", m.homogeneous);
    if let Some(h) = m.homogeneous_vmax {
        let _ = writeln!(text, "v_max: {} homogeneous: {h}", perm::v_max(v, w)?);
    }
    if let Some(f) = m.facet_count {
        let _ = writeln!(text, "facets of the pipe complex of ({}, {w}): {f}", m.v_used);
    }
    let mut json = serde_json::to_value(&m)?;
    if let Some(c) = &cg {
        let _ = writeln!(
            text,
            "co-Grassmannian: lambda(v_max) = {}, lambda(w) = {}, b = {:?}, tableaux {}, determinant {}",
            c.lambda_v, c.lambda_w, c.flag.b, c.tableaux, c.determinant
        );
        json["cograssmannian"] = serde_json::to_value(c)?;
        if let Ok(s) = mult::starting_pipe_dream(v, w) {
            let _ = writeln!(text, "starting pipe dream word {:?}", s.word());
            json["starting_pipe_dream"] = json!({ "crosses": cells_json(&s.crosses), "word": s.word() });
        }
    }
    let mut violated = false;
    if all_routes {
        let all = mult::multiplicity_all_routes(v, w)?;
        let values = all.values();
        violated = values.len() > 1;
        let _ = writeln!(text, "routes: direct {:?}, via v_max {:?}, values {values:?}", all.direct, all.via_vmax);
        json["all_routes"] = json!({ "direct": all.direct, "via_vmax": all.via_vmax, "values": values });
    }
    Ok(Outcome { json, text, violated })
}

fn homog(v: &Permutation, w: &Permutation) -> Result<Outcome> {
    same_size(v, w)?;
    below(v, w)?;
    let g = ideal::essential_minors(v, w)?;
    let by_gb = g.is_standardly_homogeneous();
    let by_components = g.is_homogeneous_by_components();
    let basis = g.interreduced_polynomials();
    let mut text = format!("standardly homogeneous: {by_gb}\nreduced basis:\n");
    for p in &basis {
        let _ = writeln!(text, "  {p}");
    }
    if by_gb != by_components {
        let _ = writeln!(text, "component test disagrees: {by_components}");
    }
    let json = json!({
        "v": v,
        "w": w,
        "homogeneous": by_gb,
        "homogeneous_by_components": by_components,
        "reduced_basis": basis.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    });
    Ok(Outcome { violated: by_gb != by_components, json, text })
}

fn gamma_cmd(ctx: &Ctx, n: usize, sample: Option<usize>, seed: u64, csv: bool, allow_large: bool) -> Result<Outcome> {
    if n < 2 {
        return Err(usage("n must be at least 2"));
    }
    check_large(n, allow_large)?;
    let mode = match sample {
        Some(count) => GammaMode::Sample { count, seed },
        None => GammaMode::Exhaustive,
    };
    let r = mult::gamma_statistics(n, mode, csv)?;
    let g = gamma_name(ctx.ascii, n);
    let text = if csv {
        let mut t = format!("{}\n", PairRecord::csv_header());
        for rec in &r.records {
            let _ = writeln!(t, "{}", rec.csv_row());
        }
        t
    } else {
        format!(
            "{g} ({}): {} pairs, {} failed\nroute 1 (homogeneous): {} = {}%\nroute 2 (v_max): {}\nroutes 1+2: {}%\nunresolved: {}\nparabolic conjecture: {} instances, {} counterexamples\n",
            r.mode,
            r.pairs,
            r.failed,
            r.direct,
            r.pct_direct,
            r.via_vmax,
            r.pct_resolved,
            r.unresolved,
            r.conjecture_instances,
            r.conjecture_counterexamples.len()
        )
    };
    Ok(Outcome::ok(serde_json::to_value(&r)?, text))
}

fn sample_cmd(n: usize, trials: usize, seed: u64, allow_large: bool) -> Result<Outcome> {
    check_large(n, allow_large)?;
    let r = sampler::estimate_success(TrialConfig { n, trials, seed })?;
    let text = format!(
        "n = {n}: {} of {} resolved = {:.2}% (95% CI {:.2}..{:.2}), {} failed, {:.2} rejections per pair\n",
        r.successes,
        r.trials - r.failed,
        r.pct,
        r.ci.0,
        r.ci.1,
        r.failed,
        r.mean_rejections
    );
    Ok(Outcome::ok(serde_json::to_value(&r)?, text))
}

fn dispatch(ctx: &Ctx, cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Diagram { v } => Ok(diagram(ctx, v)),
        Command::Essential { w } => Ok(essential(w)),
        Command::Matrix { v } => Ok(matrix(v)),
        Command::Minors { pair, all_minors, order } => minors(&pair.v, &pair.w, *all_minors, *order),
        Command::Groebner { v, w, all, n, all_minors, order, allow_large } => {
            let opts = MinorOptions { order: (*order).into(), all_minors: *all_minors, keep_records: false };
            match (all, v, w) {
                (true, None, None) => groebner_sweep(ctx, n.expect("required by clap"), opts, *allow_large),
                (false, Some(v), Some(w)) => groebner_pair(ctx, v, w, opts),
                _ => Err(usage("give either V W or --all --n N")),
            }
        }
        Command::Initial { pair } => initial(ctx, &pair.v, &pair.w),
        Command::Complex { pair, dot } => complex(&pair.v, &pair.w, *dot),
        Command::Pipes { v, target, reduced, strands } => pipes(ctx, v, target, *reduced, *strands),
        Command::Gpoly { pair } => unspecialized(&pair.v, &pair.w, true),
        Command::Spoly { pair } => unspecialized(&pair.v, &pair.w, false),
        Command::Double { w, grothendieck, check } => double(w, *grothendieck, *check),
        Command::Specialize { pair } => specialize(&pair.v, &pair.w),
        Command::Kk { pair, cache_dir, first_ascent } => kk(&pair.v, &pair.w, cache_dir.as_ref(), *first_ascent),
        Command::Mult { pair, all_routes } => mult_cmd(&pair.v, &pair.w, *all_routes),
        Command::Vmax { pair } => {
            same_size(&pair.v, &pair.w)?;
            below(&pair.v, &pair.w)?;
            let m = perm::v_max(&pair.v, &pair.w)?;
            Ok(Outcome::ok(json!({ "v": pair.v, "w": pair.w, "v_max": m }), format!("{m}\n")))
        }
        Command::Homog { pair } => homog(&pair.v, &pair.w),
        Command::Gamma { n, sample, seed, csv, allow_large } => gamma_cmd(ctx, *n, *sample, *seed, *csv, *allow_large),
        Command::Sample { n, trials, seed, allow_large } => sample_cmd(*n, *trials, *seed, *allow_large),
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let ctx = Ctx { budget: cli.budget, ascii: cli.ascii };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            let _ = writeln!(err, "error: --jobs must be positive");
            return 2;
        }
        builder = builder.num_threads(j);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    let result = pool.install(|| dispatch(&ctx, &cli.command));
    match result {
        Ok(o) => {
            let written = match cli.format {
                Format::Text => write!(out, "{}", o.text),
                Format::Json => {
                    let env = json!({ "command": cli.command.name(), "ok": !o.violated, "result": o.json });
                    writeln!(out, "{}", serde_json::to_string_pretty(&env).expect("json values serialize"))
                }
            };
            if written.is_err() {
                return 1;
            }
            if o.violated {
                let _ = writeln!(err, "invariant violated: see report");
                3
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main_entry() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
