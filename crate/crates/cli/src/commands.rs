use std::fmt;
use std::fs;
use std::path::Path;
use std::time::Instant;

use multicover::bits::PointSet;
use multicover::combinators::{self, CombinatorReport, Outcome};
use multicover::corpus::{self, CorpusParams};
use multicover::cover::{coarser_than, is_centered, is_totally_bounded, Budget, Cover, FiniteMap, Multicover, Verdict};
use multicover::error::Error;
use multicover::format::{self, Document, Space};
use multicover::game::{
    evaluate_i_policy, play_game, selection_property, solve_with, Chooser, GameConfig, GreedyStrategy, Player,
    SolveOptions, Strategy, TableStrategy, WinKind, DEFAULT_STATE_LIMIT,
};
use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::{Cli, Combinator, Command, GameArgs, Principle, Win};

enum Fail {
    Core(Error),
    Io(String),
}

impl fmt::Display for Fail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fail::Core(e) => e.fmt(f),
            Fail::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

type Res<T> = Result<T, Fail>;

/// JSON lines printed before the report, and the report.
struct Out {
    lines: Vec<Value>,
    report: Value,
}

impl Out {
    fn report(report: Value) -> Self {
        Out { lines: Vec::new(), report }
    }
}

pub fn run(cli: &Cli) -> u8 {
    let start = Instant::now();
    let result = dispatch(cli);
    let ms = start.elapsed().as_millis() as u64;
    match result {
        Ok(Out { lines, mut report }) => {
            for l in lines {
                println!("{l}");
            }
            report["timings"] = json!({ "total_ms": ms });
            println!("{report}");
            exit_code(report["verdict"].as_str().unwrap_or(""))
        }
        Err(Fail::Core(e @ (Error::StateLimit(_) | Error::SearchLimit(_)))) => {
            println!("{}", json!({ "verdict": "Unknown", "reason": e.to_string(), "timings": { "total_ms": ms } }));
            2
        }
        Err(e) => {
            let pointer = match &e {
                Fail::Core(Error::Format { pointer, .. }) => Some(pointer.clone()),
                _ => None,
            };
            println!("{}", json!({ "verdict": "error", "error": e.to_string(), "pointer": pointer }));
            3
        }
    }
}

fn exit_code(verdict: &str) -> u8 {
    match verdict {
        "II-wins" | "Verified" | "Verified-on-probe" | "Yes" | "ok" => 0,
        "I-wins" | "Refuted" | "No" => 1,
        _ => 2,
    }
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Fail::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Res<()> {
    fs::write(path, text).map_err(|e| Fail::Io(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Res<(Document, Space, String)> {
    let doc = format::parse(&read(path)?)?;
    let space = doc.space.build()?;
    let fp = doc.fingerprint()?;
    Ok((doc, space, fp))
}

fn finite<'a>(space: &'a Space, what: &str) -> Res<&'a multicover::cover::FiniteSpace> {
    space
        .finite()
        .ok_or_else(|| Fail::Core(Error::format("/space/kind", format!("{what} needs a finite space"))))
}

/// The file's game with command-line overrides and the file's probe.
fn game_config(doc: &Document, args: &GameArgs) -> Res<GameConfig> {
    let mut cfg = match (&doc.game, args.horizon) {
        (Some(g), _) => g.clone(),
        (None, Some(l)) => GameConfig::cover(l, args.budget.unwrap_or(1)),
        (None, None) => return Err(Fail::Core(Error::format("/game", "no game in the file; pass --horizon"))),
    };
    if let Some(l) = args.horizon {
        let last = cfg.budgets.last().copied().unwrap_or(Budget::Finite(1));
        cfg.horizon = l;
        cfg.budgets.resize(l, last);
    }
    if let Some(b) = args.budget {
        cfg.budgets = vec![Budget::Finite(b); cfg.horizon];
    }
    if let Some(w) = args.win {
        cfg.win = match w {
            Win::Cover => WinKind::Cover,
            Win::Omega => WinKind::Omega { k: args.k },
            Win::Gamma => WinKind::Gamma { m: args.m, f: args.f },
        };
    }
    if cfg.probe.is_none() {
        if let Space::Finite(s) = doc.space.build()? {
            if doc.probe.is_some() {
                cfg.probe = Some(format::finite_probe(doc, &s)?);
            }
        }
    }
    cfg.validate_shape()?;
    Ok(cfg)
}

fn options(cli: &Cli) -> SolveOptions {
    SolveOptions {
        state_limit: cli.limit_states.unwrap_or(DEFAULT_STATE_LIMIT),
    }
}

fn winner(p: Player) -> &'static str {
    match p {
        Player::II => "II-wins",
        Player::I => "I-wins",
    }
}

fn dispatch(cli: &Cli) -> Res<Out> {
    match &cli.command {
        Command::Solve { file, game, policy_out } => cmd_solve(cli, file, game, policy_out.as_deref()),
        Command::Play {
            file,
            game,
            covers,
            random,
            policy,
        } => cmd_play(cli, file, game, covers.as_deref(), *random, policy.as_deref()),
        Command::CheckPrinciple {
            file,
            principle,
            game,
            search_bound,
        } => cmd_check(cli, file, *principle, game, *search_bound),
        Command::VerifyCombinator {
            name,
            instance,
            other,
            map,
            pieces,
            oracle,
            game,
        } => cmd_verify(*name, instance, other.as_deref(), map.as_deref(), pieces.as_deref(), *oracle, game),
        Command::CompareCovers { file, u, v, search_bound } => cmd_compare(cli, file, *u, *v, *search_bound),
        Command::MakeSpace { file, out } => cmd_make_space(file, out.as_deref()),
        Command::Corpus {
            out,
            max_points,
            max_covers,
            max_members,
            multi_cover_points,
            max_horizon,
            budget,
        } => cmd_corpus(
            out.as_deref(),
            CorpusParams {
                max_points: *max_points,
                max_covers: *max_covers,
                max_members: *max_members,
                multi_cover_points: *multi_cover_points,
                max_horizon: *max_horizon,
                budget: *budget,
            },
        ),
    }
}

fn cmd_solve(cli: &Cli, file: &Path, args: &GameArgs, policy_out: Option<&Path>) -> Res<Out> {
    let (doc, space, fp) = load(file)?;
    let space = finite(&space, "solve")?;
    let cfg = game_config(&doc, args)?;
    let result = solve_with(space, &cfg, options(cli))?;
    let mut report = json!({
        "command": "solve",
        "fingerprint": fp,
        "game": cfg,
        "verdict": winner(result.winner),
        "states_explored": result.states_explored,
    });
    match (result.ii_policy(), result.i_policy()) {
        (Some(table), _) => {
            report["policy_entries"] = json!(table.len());
            if let Some(p) = policy_out {
                write(p, &serde_json::to_string_pretty(table).expect("tables serialize"))?;
            }
        }
        (None, Some(ip)) => {
            // I's policy against greedy II: replayable with `play --covers`.
            let greedy = greedy(space, &cfg);
            let t = play_game(space, &cfg, ip, &greedy)?;
            report["refutation"] = json!({ "covers": t.covers(), "transcript": t });
            if evaluate_i_policy(space, &cfg, ip)?.is_some() {
                report["verdict"] = json!("Unknown");
                report["reason"] = json!("I's extracted policy does not beat every answer");
            }
        }
        (None, None) => unreachable!("the solver returns a policy for the winner"),
    }
    Ok(Out::report(report))
}

fn greedy(space: &multicover::cover::FiniteSpace, cfg: &GameConfig) -> GreedyStrategy {
    GreedyStrategy {
        space: space.clone(),
        budget: cfg.budgets.iter().filter_map(|b| b.limit()).max().unwrap_or(usize::MAX),
        probe: cfg.probe_in(space),
    }
}

fn cmd_play(
    cli: &Cli,
    file: &Path,
    args: &GameArgs,
    covers: Option<&[usize]>,
    random: bool,
    policy: Option<&Path>,
) -> Res<Out> {
    let (doc, space, fp) = load(file)?;
    let space = finite(&space, "play")?;
    let cfg = game_config(&doc, args)?;
    let need_solve = policy.is_none() || (covers.is_none() && !random);
    let solved = if need_solve { Some(solve_with(space, &cfg, options(cli))?) } else { None };
    let ii: Box<dyn Strategy> = match (policy, solved.as_ref().and_then(|s| s.ii_policy())) {
        (Some(p), _) => {
            let table: TableStrategy = serde_json::from_str(&read(p)?)
                .map_err(|e| Fail::Core(Error::format("/", format!("policy table: {e}"))))?;
            Box::new(table)
        }
        (None, Some(t)) => Box::new(t.clone()),
        (None, None) => Box::new(greedy(space, &cfg)),
    };
    let random_i;
    let fixed;
    let chooser: &dyn Chooser = match (covers, random, solved.as_ref().and_then(|s| s.i_policy())) {
        (Some(c), _, _) => {
            fixed = c.to_vec();
            &fixed
        }
        (None, true, _) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            random_i = (0..cfg.horizon).map(|_| rng.gen_range(0..space.n_covers())).collect::<Vec<_>>();
            &random_i
        }
        (None, false, Some(ip)) => ip,
        (None, false, None) => {
            return Err(Fail::Core(Error::InvalidConfig(
                "II wins; give I's covers with --covers or --random".into(),
            )))
        }
    };
    let t = play_game(space, &cfg, chooser, ii.as_ref())?;
    let lines = t
        .rounds
        .iter()
        .enumerate()
        .map(|(n, r)| json!({ "round": n, "cover": r.cover, "members": r.certificate.members }))
        .collect();
    let report = json!({
        "command": "play",
        "fingerprint": fp,
        "seed": cli.seed,
        "verdict": winner(t.winner),
        "transcript": t,
    });
    Ok(Out { lines, report })
}

fn tri<Y, N>(v: &Verdict<Y, N>, exact: bool) -> &'static str {
    match (v, exact) {
        (Verdict::Yes(_), true) => "Yes",
        (Verdict::Yes(_), false) => "Verified-on-probe",
        (Verdict::No(_), _) => "No",
        (Verdict::Unknown(_), _) => "Unknown",
    }
}

fn check_lazy<C: Cover>(
    principle: Principle,
    mc: &Multicover<C>,
    probe: &[C::Point],
    budget: Budget,
    search_bound: usize,
) -> Res<Value>
where
    C::Point: serde::Serialize,
    C::Member: serde::Serialize,
{
    Ok(match principle {
        Principle::TotallyBounded => {
            let v = is_totally_bounded(mc, probe, budget);
            json!({ "verdict": tri(&v, false), "result": v })
        }
        Principle::Centered => {
            let v = is_centered(mc, probe, search_bound);
            json!({ "verdict": tri(&v, false), "result": v })
        }
        _ => {
            return Err(Fail::Core(Error::format(
                "/space/kind",
                "game principles need a finite space",
            )))
        }
    })
}

fn cmd_check(cli: &Cli, file: &Path, principle: Principle, args: &GameArgs, search_bound: usize) -> Res<Out> {
    let (doc, space, fp) = load(file)?;
    let budget = args.budget.map_or(Budget::Unbounded, Budget::Finite);
    let mut body = match &space {
        Space::Finite(s) => {
            let probe = format::finite_probe(&doc, s)?.to_vec();
            match principle {
                Principle::TotallyBounded => {
                    let v = is_totally_bounded(s.multicover(), &probe, budget);
                    json!({ "verdict": tri(&v, true), "result": v })
                }
                Principle::Centered => {
                    let v = is_centered(s.multicover(), &probe, search_bound);
                    json!({ "verdict": tri(&v, true), "result": v })
                }
                Principle::Selection => {
                    let cfg = game_config(&doc, args)?;
                    let v = selection_property(s, &cfg)?;
                    json!({ "verdict": tri(&v, true), "result": v, "game": cfg })
                }
                game => {
                    let mut a = args.clone();
                    a.win = Some(match game {
                        Principle::Menger => Win::Cover,
                        Principle::Hurewicz => Win::Gamma,
                        _ => Win::Omega,
                    });
                    let cfg = game_config(&doc, &a)?;
                    let r = solve_with(s, &cfg, options(cli))?;
                    let v = if r.winner == Player::II { "Yes" } else { "No" };
                    json!({ "verdict": v, "winner": winner(r.winner), "game": cfg })
                }
            }
        }
        Space::Lattice { dim, multicover } => {
            let probe = format::lattice_probe(&doc, *dim, cli.probe_box)?;
            check_lazy(principle, multicover, &probe, budget, search_bound)?
        }
        Space::Free { group, multicover } => {
            let probe = format::word_probe(&doc, group)?;
            check_lazy(principle, multicover, &probe, budget, search_bound)?
        }
    };
    body["command"] = json!("check-principle");
    body["principle"] = json!(principle.to_possible_value().map(|v| v.get_name().to_string()));
    body["fingerprint"] = json!(fp);
    Ok(Out::report(body))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    image: Vec<usize>,
    assign: Vec<usize>,
}

fn parse_pieces(text: &str) -> Res<Vec<PointSet>> {
    text.split('|')
        .map(|p| {
            p.split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .ok()
                        .filter(|&x| x < PointSet::CAPACITY)
                        .ok_or_else(|| Fail::Core(Error::InvalidConfig(format!("bad piece point `{s}`"))))
                })
                .collect::<Res<PointSet>>()
        })
        .collect()
}

fn cmd_verify(
    name: Combinator,
    instance: &Path,
    other: Option<&Path>,
    map: Option<&Path>,
    pieces: Option<&str>,
    oracle: bool,
    args: &GameArgs,
) -> Res<Out> {
    let (doc, space, fp) = load(instance)?;
    let x = finite(&space, "verify-combinator")?;
    let cfg = game_config(&doc, args)?;
    let need_other = || other.ok_or_else(|| Fail::Core(Error::InvalidConfig("--other is required".into())));
    let mut fingerprints = vec![fp];
    let report: CombinatorReport = match name {
        Combinator::Union => {
            let pieces = match pieces {
                Some(p) => parse_pieces(p)?,
                None => {
                    let half = x.n_points().div_ceil(2);
                    vec![PointSet::full(half), x.ground().difference(PointSet::full(half))]
                }
            };
            combinators::verify_union(x, &cfg, &pieces, oracle)?
        }
        Combinator::GammaUpgrade => combinators::verify_gamma_upgrade(x, &cfg, oracle)?,
        Combinator::Product => {
            let (doc_y, space_y, fp_y) = load(need_other()?)?;
            fingerprints.push(fp_y);
            let y = finite(&space_y, "product")?;
            let cfg_y = game_config(&doc_y, args)?;
            combinators::verify_product(x, y, &cfg, &cfg_y, oracle)?
        }
        Combinator::Pullback => {
            let (doc_y, space_y, fp_y) = load(need_other()?)?;
            fingerprints.push(fp_y);
            let y = finite(&space_y, "pullback")?;
            let cfg_y = game_config(&doc_y, args)?;
            let map_path = map.ok_or_else(|| Fail::Core(Error::InvalidConfig("--map is required".into())))?;
            let m: MapFile = serde_json::from_str(&read(map_path)?)
                .map_err(|e| Fail::Core(Error::format("/", format!("map file: {e}"))))?;
            let f = FiniteMap::new(m.image, y.n_points())?;
            combinators::verify_pullback(&f, x, y, m.assign, &cfg_y, oracle)?
        }
    };
    let verdict = match report.outcome {
        Outcome::Verified if report.oracle_agrees == Some(false) => "Unknown",
        Outcome::Verified => "Verified",
        Outcome::Refuted => "Refuted",
        Outcome::Unknown => "Unknown",
    };
    Ok(Out::report(json!({
        "command": "verify-combinator",
        "fingerprints": fingerprints,
        "verdict": verdict,
        "report": report,
    })))
}

fn compare_in<C: Cover>(mc: &Multicover<C>, u: usize, v: usize, probe: &[C::Point], bound: usize, exact: bool) -> Res<Value>
where
    C::Point: serde::Serialize,
    C::Member: serde::Serialize,
{
    let get = |i: usize| {
        mc.get(i)
            .ok_or_else(|| Fail::Core(Error::InvalidConfig(format!("no cover {i}; the space has {}", mc.len()))))
    };
    let verdict = coarser_than(get(u)?, get(v)?, probe, bound);
    Ok(json!({ "verdict": tri(&verdict, exact), "result": verdict }))
}

fn cmd_compare(cli: &Cli, file: &Path, u: usize, v: usize, bound: usize) -> Res<Out> {
    let (doc, space, fp) = load(file)?;
    let mut body = match &space {
        Space::Finite(s) => compare_in(s.multicover(), u, v, &format::finite_probe(&doc, s)?.to_vec(), bound, true)?,
        Space::Lattice { dim, multicover } => {
            compare_in(multicover, u, v, &format::lattice_probe(&doc, *dim, cli.probe_box)?, bound, false)?
        }
        Space::Free { group, multicover } => {
            compare_in(multicover, u, v, &format::word_probe(&doc, group)?, bound, false)?
        }
    };
    body["command"] = json!("compare-covers");
    body["fingerprint"] = json!(fp);
    body["u"] = json!(u);
    body["v"] = json!(v);
    Ok(Out::report(body))
}

fn cmd_make_space(file: &Path, out: Option<&Path>) -> Res<Out> {
    let doc = format::parse(&read(file)?)?;
    let norm = doc.normalize()?;
    let fp = norm.fingerprint()?;
    let text = serde_json::to_string_pretty(&norm).expect("documents serialize");
    match out {
        Some(p) => {
            write(p, &text)?;
            Ok(Out::report(json!({ "command": "make-space", "verdict": "ok", "fingerprint": fp, "out": p })))
        }
        None => Ok(Out::report(json!({
            "command": "make-space",
            "verdict": "ok",
            "fingerprint": fp,
            "document": norm,
        }))),
    }
}

fn cmd_corpus(out: Option<&Path>, params: CorpusParams) -> Res<Out> {
    let instances = corpus::generate(&params)?;
    let fps: Vec<String> = instances.iter().map(|i| i.fingerprint()).collect();
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Fail::Io(format!("{}: {e}", dir.display())))?;
        for (n, inst) in instances.iter().enumerate() {
            let text = serde_json::to_string(&inst.document()).expect("documents serialize");
            write(&dir.join(format!("{n:05}.json")), &text)?;
        }
    }
    let digest = format::fingerprint_bytes(fps.join("\n").as_bytes());
    Ok(Out::report(json!({
        "command": "corpus",
        "verdict": "ok",
        "params": params,
        "count": instances.len(),
        "spaces": instances.len() / params.max_horizon,
        "digest": digest,
    })))
}
