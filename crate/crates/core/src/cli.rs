//! The `nbhd` command line. [`run`] does all the work and returns the exit
//! code with captured output, so the binary is a thin shim.
//!
//! Exit codes: 0 true / success, 1 false / countermodel found, 2 usage or
//! input error, 3 size cap or output limit exceeded.

use std::io::Read;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::classes::{algebra_class_check, correspondence_check, frame_class_check, ClassTag, Correspondence};
use crate::dsl::{parse, AxiomSet, OneStepAxiom};
use crate::duality::{
    atom_frame, complex_algebra, dualize_complete_hom, dualize_frame_morphism, lax_algebra,
    onestep_top_check,
};
use crate::error::{Error, Result};
use crate::eval::{eval_formula, falsifying_assignment, Assignment};
use crate::frame::{Algebra, CompleteHom, Frame, FrameMorphism};
use crate::functor::{bax_map, enumerate_bax, naturality_check, Strategy};
use crate::genframe::{
    complement_within, is_pi_descriptive, is_sigma_descriptive, pi_extend, sigma_extend,
    sigma_morphism_transfer, truncate, GeneralFrame,
};
use crate::search::{count_frames, count_models, enumerate_frames, find_countermodel, Constraint, Mode, SearchSpec};
use crate::subset::{Family, Subset};

#[derive(Parser, Debug)]
#[command(name = "nbhd", version, about = "Finite neighborhood semantics toolkit")]
struct Cli {
    /// Worker threads for enumerations (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Compact JSON output (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Fail with exit code 3 instead of printing more than this many bytes.
    #[arg(long, global = true)]
    limit_bytes: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse a formula and print its normalized rendering.
    Parse {
        formula: String,
    },
    /// Evaluate a formula under an assignment.
    Eval {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        formula: String,
        /// JSON object from variable names to subset masks.
        #[arg(long, default_value = "{}")]
        assign: String,
    },
    /// Validity of a formula; prints the least falsifying assignment.
    Valid {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        formula: String,
    },
    /// Frame to complex algebra, or algebra to atom frame.
    Dualize {
        #[command(flatten)]
        model: Model,
    },
    /// Ax-subset spaces and their pushforward maps.
    #[command(subcommand)]
    Bax(BaxCmd),
    /// The free algebra over a powerset, realized on its atoms.
    #[command(subcommand)]
    Lax(LaxCmd),
    /// Frame and algebra class membership, and correspondence checks.
    #[command(subcommand)]
    Class(ClassCmd),
    /// General frames: validation, extensions, complement, truncation.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Point maps between frames and their dual homomorphisms.
    #[command(subcommand)]
    Morphism(MorphismCmd),
    /// Countermodel search and frame enumeration.
    #[command(subcommand)]
    Search(SearchCmd),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Model {
    /// Frame JSON file, or - for stdin.
    #[arg(long)]
    frame: Option<String>,
    /// Algebra JSON file, or - for stdin.
    #[arg(long)]
    algebra: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Filter,
    Backtrack,
}

#[derive(Subcommand, Debug)]
enum BaxCmd {
    /// List the Ax-subsets of the powerset of n points.
    Enum {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "")]
        axioms: String,
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
        /// Print only the number of members.
        #[arg(long)]
        count: bool,
    },
    /// Push an Ax-subset forward along a point map.
    Map {
        #[arg(long)]
        morphism: String,
        /// Family as a JSON list of masks.
        #[arg(long)]
        family: String,
        #[arg(long, default_value = "")]
        axioms: String,
    },
    /// Naturality of the pushforward against the dual algebra map.
    Natural {
        #[arg(long)]
        morphism: String,
        #[arg(long, default_value = "")]
        axioms: String,
    },
}

#[derive(Subcommand, Debug)]
enum LaxCmd {
    /// The atom realization of the free algebra over the axioms.
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "")]
        axioms: String,
    },
    /// Whether a one-step axiom evaluates to top in the realized algebra.
    Check {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "")]
        axioms: String,
        #[arg(long)]
        formula: String,
    },
}

#[derive(Subcommand, Debug)]
enum ClassCmd {
    /// Membership of a frame or algebra in a named class.
    Check {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        class: String,
    },
    /// Cent/T or iv/4 on a frame, or on random frames with --random.
    Correspond {
        #[arg(long)]
        frame: Option<String>,
        #[arg(long)]
        pair: String,
        /// Number of random frames to test instead of --frame.
        #[arg(long, requires = "n")]
        random: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Kind {
    Sigma,
    Pi,
    Both,
}

#[derive(Subcommand, Debug)]
enum GenCmd {
    /// Validate a general frame and report its flags.
    Validate {
        #[arg(long)]
        gen: String,
    },
    Sigma {
        #[arg(long)]
        gen: String,
    },
    Pi {
        #[arg(long)]
        gen: String,
    },
    /// Complement within the admissible sets.
    Complement {
        #[arg(long)]
        gen: String,
    },
    /// Restrict a frame to admissible sets.
    Truncate {
        #[arg(long)]
        frame: String,
        /// Admissible sets as a JSON list of masks.
        #[arg(long)]
        admissible: String,
    },
    Descriptive {
        #[arg(long)]
        gen: String,
        #[arg(long, value_enum, default_value = "both")]
        kind: Kind,
    },
}

#[derive(Subcommand, Debug)]
enum MorphismCmd {
    /// Neighborhood-morphism condition for a point map.
    Check {
        #[arg(long)]
        morphism: String,
        #[arg(long)]
        dom: String,
        #[arg(long)]
        cod: String,
    },
    /// Point map to complete homomorphism or back.
    Dualize {
        #[arg(long, group = "m")]
        morphism: Option<String>,
        #[arg(long, group = "m")]
        hom: Option<String>,
    },
    /// Does an admissible morphism lift to the σ-extensions?
    Transfer {
        #[arg(long)]
        morphism: String,
        #[arg(long)]
        dom: String,
        #[arg(long)]
        cod: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Refuting,
    Validating,
    Count,
}

#[derive(Subcommand, Debug)]
enum SearchCmd {
    /// Smallest frame refuting (or validating) a formula.
    Countermodel {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        /// Class names or axioms the frame must satisfy (repeatable).
        #[arg(long = "class")]
        classes: Vec<String>,
        #[arg(long, value_enum, default_value = "refuting")]
        mode: ModeArg,
    },
    /// All frames of a given size in a class.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long = "class")]
        classes: Vec<String>,
        /// One frame per isomorphism class.
        #[arg(long)]
        canonical: bool,
        #[arg(long)]
        count: bool,
    },
}

/// Exit code plus everything written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Ctx<'a> {
    stdin: &'a mut (dyn Read + Send),
    stdin_used: bool,
    max_n: Option<usize>,
    seed: u64,
}

impl Ctx<'_> {
    fn read(&mut self, arg: &str) -> Result<String> {
        if arg == "-" {
            if self.stdin_used {
                return Err(Error::invalid("stdin given for more than one input"));
            }
            self.stdin_used = true;
            let mut s = String::new();
            self.stdin.read_to_string(&mut s)?;
            Ok(s)
        } else {
            Ok(std::fs::read_to_string(Path::new(arg))?)
        }
    }

    fn load<T: DeserializeOwned>(&mut self, arg: &str) -> Result<T> {
        let text = self.read(arg)?;
        Ok(serde_json::from_str(&text)?)
    }

    fn guard(&self, n: usize) -> Result<usize> {
        match self.max_n {
            Some(cap) if n > cap => Err(Error::cap("NBHD_MAX_N", cap, n)),
            _ => Ok(n),
        }
    }

    fn algebra(&mut self, m: &Model) -> Result<Algebra> {
        let alg = match (&m.frame, &m.algebra) {
            (Some(f), _) => complex_algebra(&self.load::<Frame>(f)?),
            (_, Some(a)) => self.load::<Algebra>(a)?,
            _ => unreachable!("clap requires one"),
        };
        self.guard(alg.n())?;
        Ok(alg)
    }

    fn frame(&mut self, path: &str) -> Result<Frame> {
        let f: Frame = self.load(path)?;
        self.guard(f.n())?;
        Ok(f)
    }

    fn gen(&mut self, path: &str) -> Result<GeneralFrame> {
        let g: GeneralFrame = self.load(path)?;
        self.guard(g.n())?;
        Ok(g)
    }
}

fn axioms(list: &str, n: usize) -> Result<AxiomSet> {
    if list.trim().is_empty() {
        Ok(AxiomSet::empty())
    } else {
        AxiomSet::parse_list(list, n)
    }
}

fn masks(text: &str, n: usize) -> Result<Family> {
    let m: Vec<u32> = serde_json::from_str(text)?;
    Family::from_masks(n, &m)
}

fn assignment(text: &str) -> Result<Assignment> {
    let map: serde_json::Map<String, Value> = serde_json::from_str(text)?;
    let mut v = Assignment::new();
    for (k, val) in map {
        let m = val
            .as_u64()
            .and_then(|m| u32::try_from(m).ok())
            .ok_or_else(|| Error::invalid(format!("value for {k} must be a mask")))?;
        v.set(k, Subset(m));
    }
    Ok(v)
}

fn constraints(items: &[String]) -> Result<Vec<Constraint>> {
    items.iter().map(|s| s.parse()).collect()
}

fn value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

/// The JSON result and whether the answer is "true".
type Answer = (Value, bool);

fn dispatch(cmd: Cmd, ctx: &mut Ctx<'_>) -> Result<Answer> {
    match cmd {
        Cmd::Parse { formula } => {
            let f = parse(&formula)?;
            Ok((
                json!({
                    "formula": f.to_string(),
                    "free_vars": f.free_vars(),
                    "modal_depth": f.modal_depth(),
                    "one_step": f.is_one_step(),
                }),
                true,
            ))
        }
        Cmd::Eval { model, formula, assign } => {
            let alg = ctx.algebra(&model)?;
            let f = parse(&formula)?;
            let v = eval_formula(&alg, &f, &assignment(&assign)?)?;
            Ok((json!({ "value": v.mask() }), true))
        }
        Cmd::Valid { model, formula } => {
            let alg = ctx.algebra(&model)?;
            let f = parse(&formula)?;
            let w = falsifying_assignment(&alg, &f)?;
            let valid = w.is_none();
            Ok((json!({ "valid": valid, "witness": w }), valid))
        }
        Cmd::Dualize { model } => match (&model.frame, &model.algebra) {
            (Some(f), _) => Ok((value(&complex_algebra(&ctx.frame(f)?)), true)),
            _ => {
                let alg = ctx.algebra(&model)?;
                Ok((value(&atom_frame(&alg)), true))
            }
        },
        Cmd::Bax(c) => bax(c, ctx),
        Cmd::Lax(c) => lax(c, ctx),
        Cmd::Class(c) => class(c, ctx),
        Cmd::Gen(c) => gen(c, ctx),
        Cmd::Morphism(c) => morphism(c, ctx),
        Cmd::Search(c) => search(c, ctx),
    }
}

fn strategy(arg: Option<StrategyArg>, axs: &AxiomSet) -> Strategy {
    match arg {
        Some(StrategyArg::Filter) => Strategy::Filter,
        Some(StrategyArg::Backtrack) => Strategy::UpsetBacktrack,
        None => Strategy::default_for(axs),
    }
}

fn bax(cmd: BaxCmd, ctx: &mut Ctx<'_>) -> Result<Answer> {
    match cmd {
        BaxCmd::Enum { n, axioms: list, strategy: s, count } => {
            let n = ctx.guard(n)?;
            let axs = axioms(&list, n)?;
            let space = enumerate_bax(n, &axs, strategy(s, &axs))?;
            if count {
                Ok((json!({ "count": space.len() }), true))
            } else {
                Ok((value(&space), true))
            }
        }
        BaxCmd::Map { morphism, family, axioms: list } => {
            let f: FrameMorphism = ctx.load(&morphism)?;
            ctx.guard(f.n_dom().max(f.n_cod()))?;
            let w = masks(&family, f.n_dom())?;
            let axs = axioms(&list, f.n_dom())?;
            Ok((json!({ "image": bax_map(&f, &w, &axs)?.masks() }), true))
        }
        BaxCmd::Natural { morphism, axioms: list } => {
            let f: FrameMorphism = ctx.load(&morphism)?;
            ctx.guard(f.n_dom().max(f.n_cod()))?;
            let axs = axioms(&list, f.n_dom())?;
            let report = naturality_check(&f, &axs, None, None)?;
            let pass = report.pass();
            Ok((value(&report), pass))
        }
    }
}

fn lax(cmd: LaxCmd, ctx: &mut Ctx<'_>) -> Result<Answer> {
    match cmd {
        LaxCmd::Build { n, axioms: list } => {
            let n = ctx.guard(n)?;
            let axs = axioms(&list, n)?;
            Ok((value(&lax_algebra(n, &axs, Strategy::default_for(&axs))?), true))
        }
        LaxCmd::Check { n, axioms: list, formula } => {
            let n = ctx.guard(n)?;
            let axs = axioms(&list, n)?;
            let lax = lax_algebra(n, &axs, Strategy::default_for(&axs))?;
            let ax = OneStepAxiom::new(parse(&formula)?)?;
            let top = onestep_top_check(&lax, &ax)?;
            Ok((json!({ "top": top }), top))
        }
    }
}

fn class(cmd: ClassCmd, ctx: &mut Ctx<'_>) -> Result<Answer> {
    match cmd {
        ClassCmd::Check { model, class } => {
            let tag: ClassTag = class.parse()?;
            let holds = match (&model.frame, tag.is_frame_tag()) {
                (Some(path), true) => frame_class_check(&ctx.frame(path)?, tag)?,
                (None, true) => {
                    return Err(Error::invalid(format!("{tag} is a frame class; pass --frame")))
                }
                (_, false) => algebra_class_check(&ctx.algebra(&model)?, tag)?,
            };
            Ok((json!({ "class": tag.to_string(), "holds": holds }), holds))
        }
        ClassCmd::Correspond { frame, pair, random, n } => {
            let pair: Correspondence = pair.parse()?;
            match (frame, random) {
                (Some(path), None) => {
                    let report = correspondence_check(&ctx.frame(&path)?, pair);
                    let agree = report.agree;
                    Ok((value(&report), agree))
                }
                (None, Some(count)) => {
                    let n = ctx.guard(n.expect("clap requires n"))?;
                    if n > crate::subset::MAX_FAMILY_N {
                        return Err(Error::cap("random frames", crate::subset::MAX_FAMILY_N, n));
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
                    let mut disagreements = Vec::new();
                    for _ in 0..count {
                        let nbhd = (0..n)
                            .map(|_| {
                                let mut w = Family::empty(n);
                                for a in Subset::all(n) {
                                    if rng.random::<bool>() {
                                        w.insert(a);
                                    }
                                }
                                w
                            })
                            .collect();
                        let f = Frame::new(n, nbhd)?;
                        if !correspondence_check(&f, pair).agree {
                            disagreements.push(f);
                        }
                    }
                    let ok = disagreements.is_empty();
                    Ok((
                        json!({ "pair": pair, "checked": count, "disagreements": disagreements }),
                        ok,
                    ))
                }
                _ => Err(Error::invalid("pass exactly one of --frame and --random")),
            }
        }
    }
}

fn gen(cmd: GenCmd, ctx: &mut Ctx<'_>) -> Result<Answer> {
    match cmd {
        GenCmd::Validate { gen } => {
            let text = ctx.read(&gen)?;
            match serde_json::from_str::<GeneralFrame>(&text) {
                Ok(g) => {
                    ctx.guard(g.n())?;
                    Ok((
                        json!({
                            "valid": true,
                            "tight": g.is_tight(),
                            "differentiated": g.is_differentiated(),
                            "compact": g.is_compact(),
                        }),
                        true,
                    ))
                }
                Err(e) if e.is_data() => {
                    Ok((json!({ "valid": false, "reason": e.to_string() }), false))
                }
                Err(e) => Err(e.into()),
            }
        }
        GenCmd::Sigma { gen } => Ok((value(&sigma_extend(&ctx.gen(&gen)?)?), true)),
        GenCmd::Pi { gen } => Ok((value(&pi_extend(&ctx.gen(&gen)?)?), true)),
        GenCmd::Complement { gen } => Ok((value(&complement_within(&ctx.gen(&gen)?)?), true)),
        GenCmd::Truncate { frame, admissible } => {
            let f = ctx.frame(&frame)?;
            let a = masks(&admissible, f.n())?;
            Ok((value(&truncate(&f, &a)?), true))
        }
        GenCmd::Descriptive { gen, kind } => {
            let g = ctx.gen(&gen)?;
            let sigma = is_sigma_descriptive(&g);
            let pi = is_pi_descriptive(&g);
            let ok = match kind {
                Kind::Sigma => sigma,
                Kind::Pi => pi,
                Kind::Both => sigma && pi,
            };
            Ok((json!({ "sigma": sigma, "pi": pi }), ok))
        }
    }
}

fn morphism(cmd: MorphismCmd, ctx: &mut Ctx<'_>) -> Result<Answer> {
    match cmd {
        MorphismCmd::Check { morphism, dom, cod } => {
            let f: FrameMorphism = ctx.load(&morphism)?;
            let dom = ctx.frame(&dom)?;
            let cod = ctx.frame(&cod)?;
            let w = f.morphism_witness(&dom, &cod)?;
            let ok = w.is_none();
            let witness = w.map(|(x, b)| json!({ "point": x, "set": b.mask() }));
            Ok((json!({ "morphism": ok, "witness": witness }), ok))
        }
        MorphismCmd::Dualize { morphism, hom } => match (morphism, hom) {
            (Some(path), None) => {
                let f: FrameMorphism = ctx.load(&path)?;
                Ok((value(&dualize_frame_morphism(&f)), true))
            }
            (None, Some(path)) => {
                let h: CompleteHom = ctx.load(&path)?;
                Ok((value(&dualize_complete_hom(&h)), true))
            }
            _ => Err(Error::invalid("pass exactly one of --morphism and --hom")),
        },
        MorphismCmd::Transfer { morphism, dom, cod } => {
            let f: FrameMorphism = ctx.load(&morphism)?;
            let dom = ctx.gen(&dom)?;
            let cod = ctx.gen(&cod)?;
            let report = sigma_morphism_transfer(&f, &dom, &cod)?;
            let ok = report.pass();
            Ok((value(&report), ok))
        }
    }
}

fn search(cmd: SearchCmd, ctx: &mut Ctx<'_>) -> Result<Answer> {
    match cmd {
        SearchCmd::Countermodel { formula, max_n, classes, mode } => {
            let spec = SearchSpec {
                max_n: ctx.guard(max_n)?,
                constraints: constraints(&classes)?,
                target: parse(&formula)?,
                mode: match mode {
                    ModeArg::Refuting => Mode::FindRefuting,
                    ModeArg::Validating => Mode::FindValidating,
                    ModeArg::Count => Mode::Count,
                },
            };
            match spec.mode {
                Mode::Count => Ok((value(&count_models(&spec)?), true)),
                Mode::FindRefuting => {
                    let r = find_countermodel(&spec)?;
                    let none = !r.found;
                    Ok((value(&r), none))
                }
                Mode::FindValidating => {
                    let r = find_countermodel(&spec)?;
                    let found = r.found;
                    Ok((value(&r), found))
                }
            }
        }
        SearchCmd::Enumerate { n, classes, canonical, count } => {
            let n = ctx.guard(n)?;
            let cs = constraints(&classes)?;
            if count {
                let k = count_frames(n, &cs, canonical)?;
                Ok((json!({ "n": n, "count": k }), true))
            } else {
                let frames = enumerate_frames(n, &cs, canonical)?;
                Ok((json!({ "n": n, "count": frames.len(), "frames": frames }), true))
            }
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_cap() {
        3
    } else {
        2
    }
}

fn env_max_n() -> std::result::Result<Option<usize>, String> {
    match std::env::var("NBHD_MAX_N") {
        Err(_) => Ok(None),
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| format!("NBHD_MAX_N must be a non-negative integer, got {s:?}")),
    }
}

/// Runs the command line `args` (program name first) against `stdin`.
pub fn run_with_stdin<I, T>(args: I, stdin: &mut (dyn Read + Send)) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let fail = |code, msg: String| Outcome {
        code,
        stdout: String::new(),
        stderr: msg,
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                fail(2, text)
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let max_n = match env_max_n() {
        Ok(m) => m,
        Err(msg) => return fail(2, msg + "\n"),
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        if w == 0 {
            return fail(2, "--workers must be at least 1\n".into());
        }
        pool = pool.num_threads(w);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => return fail(2, format!("{e}\n")),
    };
    let mut ctx = Ctx {
        stdin,
        stdin_used: false,
        max_n,
        seed: cli.seed,
    };
    let pretty = cli.pretty;
    let limit = cli.limit_bytes;
    let result = pool.install(|| dispatch(cli.cmd, &mut ctx));
    match result {
        Ok((v, truth)) => {
            let mut text = if pretty {
                serde_json::to_string_pretty(&v)
            } else {
                serde_json::to_string(&v)
            }
            .expect("json values serialize");
            text.push('\n');
            if let Some(limit) = limit {
                if text.len() > limit {
                    return fail(
                        3,
                        format!("output of {} bytes exceeds --limit-bytes {limit}\n", text.len()),
                    );
                }
            }
            Outcome {
                code: if truth { 0 } else { 1 },
                stdout: text,
                stderr: String::new(),
            }
        }
        Err(e) => fail(exit_code(&e), format!("error: {e}\n")),
    }
}

/// [`run_with_stdin`] on the process's stdin.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with_stdin(args, &mut std::io::stdin())
}
