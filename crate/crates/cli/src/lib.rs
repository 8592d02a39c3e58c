//! Command dispatch for `psym`. Every command maps a JSON payload to a
//! result document `{"ok": .., "result": .., "witness": ..}` and an exit
//! status (0 ok, 1 domain-level failure with witness, 2 malformed input).

use std::collections::BTreeSet;

use clap::ValueEnum;
use partial_symmetry::acceptance;
use partial_symmetry::clopen::{
    self, carac_c_check, enumerate_base, fell_membership, is_down_closed, is_hereditary_sublattice,
    lattice_op, tilde_truncated, FellKind, LatticeOp,
};
use partial_symmetry::lattice_iso::{self, Check};
use partial_symmetry::pbij::{
    self, check_convergence, subbasic_membership, tau_pp_distance, SequenceWindow,
};
use partial_symmetry::{
    sample, Clopen, Error, ExactDistance, FiniteInverseSemigroup, FiniteSemilattice,
    FloatDistance, HcoQuery, PartialBijection, PrefixMap, SubbasicKind, TruncatedLatticeMap, Word,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Compose,
    Invert,
    Idempotent,
    Nbhd,
    Converge,
    Metric,
    WagnerPreston,
    Ideal,
    Compat,
    Munn,
    MunnMember,
    ClopenOp,
    Base,
    Tilde,
    Hereditary,
    Fell,
    PmCompose,
    PmInvert,
    PmImage,
    PmApply,
    Hco,
    Encode,
    Decode,
    PhiCheck,
    NbhdIdentities,
    Census,
    Verify,
}

/// Flags that override or complete the payload.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub depth: Option<usize>,
    pub window: Option<u64>,
    pub strict_inverse: Option<bool>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    /// Text to write, newline-terminated.
    pub output: String,
}

impl Outcome {
    fn doc(status: i32, doc: Value) -> Self {
        Self {
            status,
            output: format!("{doc}\n"),
        }
    }
}

/// A failure that ends a command early.
enum Failure {
    Malformed { path: String, message: String },
    Domain { message: String, witness: Value },
}

type Run = Result<Reply, Failure>;

/// A successful reply, possibly a domain-level negative answer.
struct Reply {
    ok: bool,
    result: Value,
    witness: Option<Value>,
}

fn ok(result: impl Serialize) -> Run {
    Ok(Reply {
        ok: true,
        result: to_value(result),
        witness: None,
    })
}

fn refuted(result: impl Serialize, witness: impl Serialize) -> Run {
    Ok(Reply {
        ok: false,
        result: to_value(result),
        witness: Some(to_value(witness)),
    })
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("result types serialize to JSON")
}

fn malformed(path: &str, message: impl ToString) -> Failure {
    Failure::Malformed {
        path: path.to_string(),
        message: message.to_string(),
    }
}

/// Maps a library error raised while processing the field at `path`.
fn lib_error(path: &str, e: Error) -> Failure {
    match e {
        Error::Malformed(_) | Error::ResourceLimit(_) => malformed(path, e),
        Error::Inconsistent { ref witness, .. } => Failure::Domain {
            witness: json!({ "key": witness }),
            message: e.to_string(),
        },
        Error::Consistency(_) => Failure::Domain {
            witness: Value::Null,
            message: e.to_string(),
        },
    }
}

fn parse<T: DeserializeOwned>(payload: &Value) -> Result<T, Failure> {
    serde_path_to_error::deserialize(payload).map_err(|e| {
        let path = e.path().to_string();
        malformed(if path.is_empty() { "." } else { &path }, e.into_inner())
    })
}

fn depth_of(opts: &Options, payload: Option<usize>) -> Result<usize, Failure> {
    opts.depth
        .or(payload)
        .ok_or_else(|| malformed("depth", "missing depth (payload field or --depth)"))
}

/// Runs a command on a payload. Empty input is treated as `{}`.
pub fn run(command: Command, input: &str, opts: &Options) -> Outcome {
    if command == Command::Verify {
        return verify(opts);
    }
    let payload: Value = if input.trim().is_empty() {
        json!({})
    } else {
        match serde_json::from_str(input) {
            Ok(v) => v,
            Err(e) => return failure(malformed(".", format!("invalid JSON: {e}"))),
        }
    };
    match dispatch(command, &payload, opts) {
        Ok(reply) => {
            let mut doc = json!({ "ok": reply.ok, "result": reply.result });
            if let Some(w) = reply.witness {
                doc["witness"] = w;
            }
            Outcome::doc(if reply.ok { 0 } else { 1 }, doc)
        }
        Err(f) => failure(f),
    }
}

fn failure(f: Failure) -> Outcome {
    match f {
        Failure::Malformed { path, message } => Outcome::doc(
            2,
            json!({ "ok": false, "result": null, "error": { "path": path, "message": message } }),
        ),
        Failure::Domain { message, witness } => Outcome::doc(
            1,
            json!({ "ok": false, "result": null, "witness": witness, "error": { "message": message } }),
        ),
    }
}

fn verify(opts: &Options) -> Outcome {
    let seed = opts.seed.unwrap_or(acceptance::DEFAULT_SEED);
    let reports = acceptance::run_all(seed);
    let mut output = String::new();
    for r in &reports {
        output.push_str(&format!("{r}\n"));
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    output.push_str(&format!(
        "acceptance: {} passed, {failed} failed (seed {seed})\n",
        reports.len() - failed
    ));
    Outcome {
        status: if failed == 0 { 0 } else { 1 },
        output,
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Pair<T> {
    f: T,
    g: T,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Single<T> {
    f: T,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NbhdArgs {
    f: PartialBijection,
    kind: SubbasicKind,
    x: Option<u64>,
    y: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConvergeArgs {
    terms: Vec<PartialBijection>,
    claimed_limit: PartialBijection,
    window_bound: Option<u64>,
    strict_inverse: Option<bool>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricArgs {
    f: PartialBijection,
    g: PartialBijection,
    horizon: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SemigroupArgs {
    semigroup: FiniteInverseSemigroup,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SemilatticeArgs {
    semilattice: FiniteSemilattice,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementsArgs {
    elements: Vec<PartialBijection>,
}

#[derive(Deserialize)]
struct WithSemilattice<T> {
    #[serde(flatten)]
    semilattice: FiniteSemilattice,
    #[serde(flatten)]
    rest: T,
}

#[derive(Deserialize)]
struct IdealArgs {
    x: usize,
}

#[derive(Deserialize)]
struct MemberArgs {
    f: PartialBijection,
}

#[derive(Deserialize)]
struct NoArgs {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClopenOpArgs {
    op: LatticeOp,
    a: Clopen,
    b: Option<Clopen>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DepthArgs {
    depth: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TildeArgs {
    v: Clopen,
    depth: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyArgs {
    family: Vec<Clopen>,
    depth: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FellArgs {
    k: Clopen,
    kind: FellKind,
    v: Clopen,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ImageArgs {
    h: PrefixMap,
    u: Clopen,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ApplyArgs {
    h: PrefixMap,
    x: Word,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HcoArgs {
    h: PrefixMap,
    query: HcoQuery,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EncodeArgs {
    h: PrefixMap,
    depth: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PhiArgs {
    f: PrefixMap,
    g: PrefixMap,
    depth: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IdentitiesArgs {
    o: Clopen,
    p: Clopen,
    maps: Option<Vec<PrefixMap>>,
    depth: Option<usize>,
}

#[derive(Serialize)]
struct Distance {
    exact: String,
    float: FloatDistance,
    horizon: u64,
}

#[derive(Serialize)]
struct FamilyReport {
    hereditary: bool,
    down_closed: bool,
    union_closed: bool,
}

/// Sample size used by `nbhd-identities` when no maps are given.
const IDENTITY_SAMPLE: usize = 100;

fn dispatch(command: Command, payload: &Value, opts: &Options) -> Run {
    match command {
        Command::Compose => {
            let a: Pair<PartialBijection> = parse(payload)?;
            ok(pbij::compose(&a.f, &a.g))
        }
        Command::Invert => {
            let a: Single<PartialBijection> = parse(payload)?;
            ok(pbij::invert(&a.f))
        }
        Command::Idempotent => {
            let a: Single<PartialBijection> = parse(payload)?;
            ok(pbij::is_idempotent(&a.f))
        }
        Command::Nbhd => {
            let a: NbhdArgs = parse(payload)?;
            let member = subbasic_membership(&a.f, a.kind, a.x, a.y).map_err(|e| lib_error("kind", e))?;
            ok(member)
        }
        Command::Converge => {
            let a: ConvergeArgs = parse(payload)?;
            let bound = opts
                .window
                .or(a.window_bound)
                .ok_or_else(|| malformed("window_bound", "missing window bound (payload field or --window)"))?;
            let strict = opts.strict_inverse.or(a.strict_inverse).unwrap_or(false);
            let window = SequenceWindow::new(a.terms, a.claimed_limit, bound).map_err(|e| lib_error("terms", e))?;
            let verdict = check_convergence(&window, strict);
            match verdict.witness() {
                None => ok(&verdict),
                Some(w) => refuted(&verdict, w),
            }
        }
        Command::Metric => {
            let a: MetricArgs = parse(payload)?;
            let horizon = opts
                .window
                .or(a.horizon)
                .ok_or_else(|| malformed("horizon", "missing horizon (payload field or --window)"))?;
            let exact: ExactDistance = tau_pp_distance(&a.f, &a.g, horizon);
            ok(Distance {
                exact: exact.to_string(),
                float: tau_pp_distance(&a.f, &a.g, horizon),
                horizon,
            })
        }
        Command::WagnerPreston => {
            let has = |key: &str| payload.get(key).is_some();
            let s = if has("semigroup") {
                parse::<SemigroupArgs>(payload)?.semigroup
            } else if has("semilattice") {
                let e = parse::<SemilatticeArgs>(payload)?.semilattice;
                FiniteInverseSemigroup::from_semilattice(&e).map_err(|err| lib_error("semilattice", err))?
            } else if has("elements") {
                let elements = parse::<ElementsArgs>(payload)?.elements;
                FiniteInverseSemigroup::from_partial_bijections(&elements).map_err(|e| lib_error("elements", e))?
            } else {
                return Err(malformed(".", "expected one of `semigroup`, `semilattice` or `elements`"));
            };
            let theta = pbij::wagner_preston(&s).map_err(|e| lib_error("semigroup", e))?;
            ok(json!({ "semigroup": s, "representation": theta }))
        }
        Command::Ideal => {
            let a: WithSemilattice<IdealArgs> = parse(payload)?;
            ok(a.semilattice.principal_ideal(a.rest.x).map_err(|e| lib_error("x", e))?)
        }
        Command::Compat => {
            let a: WithSemilattice<NoArgs> = parse(payload)?;
            ok(a.semilattice.compat_pairs())
        }
        Command::Munn => {
            let e: FiniteSemilattice = parse(payload)?;
            ok(e.munn_semigroup().map_err(|err| lib_error("meet", err))?)
        }
        Command::MunnMember => {
            let a: WithSemilattice<MemberArgs> = parse(payload)?;
            ok(a.semilattice.is_munn_member(&a.rest.f).map_err(|e| lib_error("f", e))?)
        }
        Command::ClopenOp => {
            let a: ClopenOpArgs = parse(payload)?;
            ok(lattice_op(a.op, &a.a, a.b.as_ref()).map_err(|e| lib_error("b", e))?)
        }
        Command::Base => {
            let a: DepthArgs = parse(payload)?;
            let d = depth_of(opts, a.depth)?;
            ok(enumerate_base(d).map_err(|e| lib_error("depth", e))?)
        }
        Command::Tilde => {
            let a: TildeArgs = parse(payload)?;
            let d = depth_of(opts, a.depth)?;
            ok(tilde_truncated(&a.v, d).map_err(|e| lib_error("depth", e))?)
        }
        Command::Hereditary => {
            let a: FamilyArgs = parse(payload)?;
            let d = depth_of(opts, a.depth)?;
            let report = FamilyReport {
                hereditary: is_hereditary_sublattice(&a.family, d).map_err(|e| lib_error("family", e))?,
                down_closed: is_down_closed(&a.family, d).map_err(|e| lib_error("family", e))?,
                union_closed: carac_c_check(&a.family, d).map_err(|e| lib_error("family", e))?,
            };
            ok(report)
        }
        Command::Fell => {
            let a: FellArgs = parse(payload)?;
            ok(fell_membership(&a.k, a.kind, &a.v))
        }
        Command::PmCompose => {
            let a: Pair<PrefixMap> = parse(payload)?;
            ok(a.f.compose(&a.g))
        }
        Command::PmInvert => {
            let a: Single<PrefixMap> = parse(payload)?;
            ok(a.f.inverse())
        }
        Command::PmImage => {
            let a: ImageArgs = parse(payload)?;
            ok(a.h.image_of(&a.u))
        }
        Command::PmApply => {
            let a: ApplyArgs = parse(payload)?;
            ok(a.h.apply_point(&a.x))
        }
        Command::Hco => {
            let a: HcoArgs = parse(payload)?;
            ok(a.h.hco_membership(&a.query))
        }
        Command::Encode => {
            let a: EncodeArgs = parse(payload)?;
            let d = depth_of(opts, a.depth)?;
            ok(lattice_iso::encode(&a.h, d).map_err(|e| lib_error("depth", e))?)
        }
        Command::Decode => {
            let w: TruncatedLatticeMap = parse(payload)?;
            match lattice_iso::decode(&w) {
                Ok(h) => ok(h),
                Err(Error::Inconsistent { witness, reason }) => {
                    refuted(Value::Null, json!({ "key": witness, "reason": reason }))
                }
                Err(e) => Err(lib_error("entries", e)),
            }
        }
        Command::PhiCheck => {
            let a: PhiArgs = parse(payload)?;
            let d = depth_of(opts, a.depth)?;
            match lattice_iso::phi_homomorphism_check(&a.f, &a.g, d).map_err(|e| lib_error("depth", e))? {
                Check::Holds => ok(json!({ "holds": true })),
                Check::Fails(w) => refuted(json!({ "holds": false }), w),
            }
        }
        Command::NbhdIdentities => {
            let a: IdentitiesArgs = parse(payload)?;
            let d = depth_of(opts, a.depth)?;
            let maps = match a.maps {
                Some(maps) => maps,
                None => {
                    let mut rng = sample::rng(opts.seed.unwrap_or(acceptance::DEFAULT_SEED));
                    (0..IDENTITY_SAMPLE).map(|_| sample::prefix_map(&mut rng, d)).collect()
                }
            };
            let check = lattice_iso::neighborhood_correspondence_check(&a.o, &a.p, &maps, d)
                .map_err(|e| lib_error("maps", e))?;
            match check {
                Check::Holds => ok(json!({ "holds": true, "maps_checked": maps.len() })),
                Check::Fails(w) => refuted(json!({ "holds": false, "maps_checked": maps.len() }), w),
            }
        }
        Command::Census => {
            let a: DepthArgs = parse(payload)?;
            let d = depth_of(opts, a.depth)?;
            census(d)
        }
        Command::Verify => unreachable!("handled before parsing"),
    }
}

/// Largest depth whose families of `B_d` can be scanned exhaustively.
const MAX_CENSUS_DEPTH: usize = 2;

fn census(d: usize) -> Run {
    if d > MAX_CENSUS_DEPTH {
        return Err(malformed(
            "depth",
            format!("census scans all 2^|B_d| families; depth is limited to {MAX_CENSUS_DEPTH}"),
        ));
    }
    let base = enumerate_base(d).map_err(|e| lib_error("depth", e))?;
    let mut count = 0usize;
    let mut mismatch = None;
    let tildes: BTreeSet<BTreeSet<Clopen>> = base
        .iter()
        .map(|v| clopen::tilde_truncated(v, d))
        .collect::<Result<_, _>>()
        .map_err(|e| lib_error("depth", e))?;
    for choice in 0u64..1 << base.len() {
        let family: Vec<Clopen> = (0..base.len())
            .filter(|i| choice >> i & 1 == 1)
            .map(|i| base[i].clone())
            .collect();
        if is_hereditary_sublattice(&family, d).map_err(|e| lib_error("depth", e))? {
            count += 1;
            let set: BTreeSet<Clopen> = family.into_iter().collect();
            if mismatch.is_none() && !tildes.contains(&set) {
                mismatch = Some(set);
            }
        }
    }
    match mismatch {
        None if count == tildes.len() => ok(json!({ "count": count })),
        None => refuted(json!({ "count": count }), json!({ "expected": tildes.len() })),
        Some(family) => refuted(json!({ "count": count }), json!({ "family": family })),
    }
}
