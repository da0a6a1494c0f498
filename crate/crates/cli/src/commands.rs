use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use expander_match::certify::{
    certify_bounded_degree, certify_expansion, offline_match, refute_online_matchability,
    search_bounded_degree, search_random_expander, CondenserParams, SearchParams,
};
use expander_match::matcher::{load_bound, quality_bound};
use expander_match::netsim::verify_disjoint;
use expander_match::ratio::{ceil_log2, fmt_exact, retained};
use expander_match::{
    BipartiteGraph, Error, LeftSet, MatchParams, Matcher, Mode, Network, NoShareMatcher,
    OneProbeStore, OnlineMatcher, Rational, RequestList,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::args::{
    Cli, Command, DictArgs, GenArgs, HashArgs, MatchArgs, MatchParamArgs, RouteArgs, StoreMode,
    TransformArgs, VerifyArgs,
};
use crate::trace::{parse_dict, parse_match, parse_route, DictOp, MatchOp, RouteOp};
use crate::CliError;

type Outcome = Result<bool, CliError>;

/// Writes report lines and remembers whether any guarantee failed.
struct Report<'a> {
    out: &'a mut dyn Write,
    ok: bool,
}

impl<'a> Report<'a> {
    fn new(out: &'a mut dyn Write) -> Self {
        Self { out, ok: true }
    }

    fn line(&mut self, text: impl AsRef<str>) -> Result<(), CliError> {
        writeln!(self.out, "{}", text.as_ref())?;
        Ok(())
    }

    fn raw(&mut self, text: &str) -> Result<(), CliError> {
        self.out.write_all(text.as_bytes())?;
        if text.lines().any(|l| l.starts_with("FAIL")) {
            self.ok = false;
        }
        Ok(())
    }

    fn check(&mut self, ok: bool, what: impl AsRef<str>) -> Result<(), CliError> {
        self.ok &= ok;
        self.line(format!(
            "{} {}",
            if ok { "PASS" } else { "FAIL" },
            what.as_ref()
        ))
    }
}

pub fn dispatch(cli: &Cli, out: &mut dyn Write) -> Outcome {
    match &cli.command {
        Command::Gen(a) => gen(a, cli.budget, out),
        Command::Verify(a) => verify(a, cli.budget, out),
        Command::Match(a) => run_match(a, out),
        Command::Transform(a) => transform(a, out),
        Command::Dict(a) => dict(a, out),
        Command::Route(a) => route(a, out),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_graph(path: &Path) -> Result<BipartiteGraph, CliError> {
    Ok(BipartiteGraph::parse(&read(path)?)?)
}

fn join(ids: impl IntoIterator<Item = usize>) -> String {
    ids.into_iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn rat(count: usize) -> Rational {
    Rational::from_integer(count as u64)
}

fn gen(a: &GenArgs, budget: u64, out: &mut dyn Write) -> Outcome {
    let params = SearchParams {
        n_left: a.n_left,
        n_right: a.n_right,
        degree: a.degree,
        capacity: a.capacity,
        epsilon: a.eps,
        seed: a.seed,
        max_tries: a.max_tries,
    };
    let found = match a.share_bound {
        None => {
            search_random_expander(&params, budget).map(|(g, c)| (g, c.to_report(Some(&a.eps))))
        }
        Some(r) => {
            search_bounded_degree(&params, r, budget).map(|(g, c)| (g, c.to_report(Some(&a.eps))))
        }
    };
    let mut report = Report::new(out);
    let (graph, cert) = match found {
        Ok(found) => found,
        Err(Error::SearchFailed { tries, best }) => {
            report.check(false, format!("search tries={tries} best={best}"))?;
            return Ok(false);
        }
        Err(e) => return Err(e.into()),
    };
    match &a.out {
        Some(path) => std::fs::write(path, graph.to_text()).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        None => report.raw(&graph.to_text())?,
    }
    report.line(format!("seed={}", a.seed))?;
    report.raw(&cert)?;
    Ok(report.ok)
}

fn verify(a: &VerifyArgs, budget: u64, out: &mut dyn Write) -> Outcome {
    let g = load_graph(&a.graph)?;
    let mut report = Report::new(out);
    let any = a.degree || a.online || a.offline.is_some() || a.condenser;
    if a.expansion || !any {
        report.raw(&certify_expansion(&g, a.capacity, budget)?.to_report(a.eps.as_ref()))?;
    }
    if a.degree {
        let cert = certify_bounded_degree(&g, a.capacity, a.share_bound, budget)?;
        report.raw(&cert.to_report(a.eps.as_ref()))?;
    }
    if a.online {
        let v = refute_online_matchability(&g, a.capacity, a.ell, a.share_bound, budget)?;
        report.line(format!(
            "online K={} ell={} r={} matchable={} states={}",
            a.capacity, a.ell, a.share_bound, v.matchable, v.states
        ))?;
        if let Some(w) = v.witness {
            report.raw(&w.render())?;
        }
    }
    if let Some(ids) = &a.offline {
        let s: LeftSet = ids.0.iter().copied().collect();
        match offline_match(&g, &s, a.rounds)? {
            Ok(m) => {
                for (x, ps) in &m {
                    report.line(format!("offline {x} -> {}", join(ps.iter().copied())))?;
                }
                report.check(true, format!("offline set={s} rounds={}", a.rounds))?;
            }
            Err(f) => report.check(
                false,
                format!(
                    "offline set={s} round={} hall_violator={} neighborhood={{{}}}",
                    f.round,
                    f.hall_violator,
                    join(f.neighborhood.iter().copied())
                ),
            )?,
        }
    }
    if a.condenser {
        let eps = a
            .eps
            .ok_or_else(|| CliError::Usage("--condenser needs --eps".into()))?;
        let p = CondenserParams::for_graph(&g, a.loss, a.kmax)?;
        let condenser = p.is_condenser(&g, &eps, budget)?;
        let degree = p.bounded_degree_side(&g, &eps, budget)?;
        report.line(format!(
            "condenser n={} d={} m={} e={} kmax={} eps={} room={} overhead={}",
            p.n,
            p.d,
            p.m,
            p.e,
            p.k_max,
            fmt_exact(&eps),
            p.room_condition(),
            p.overhead()
        ))?;
        report.line(format!(
            "is_condenser={condenser} bounded_degree_with_room={degree}"
        ))?;
        report.check(condenser == degree, "condenser_equivalence")?;
    }
    Ok(report.ok)
}

fn match_params(p: &MatchParamArgs, capacity: usize) -> Result<MatchParams, CliError> {
    Ok(MatchParams::new(capacity, p.eps, p.share_bound)?)
}

fn run_match(a: &MatchArgs, out: &mut dyn Write) -> Outcome {
    let g = load_graph(&a.graph)?;
    let ops = parse_match(&read(&a.trace)?)?;
    let params = match_params(&a.params, a.params.capacity)?;
    let m = Matcher::new(&g, params.clone());
    let quality = quality_bound(&params.epsilon, g.left_degree());
    let mut list = RequestList::new(params.capacity);
    let mut report = Report::new(out);
    report.line(format!("params {params}"))?;
    for op in ops {
        match op {
            MatchOp::Push(x) => {
                g.check_left(x)?;
                list.push(x)?;
                let loads = m.match_all(list.as_slice())?;
                let bound = load_bound(list.len(), params.share_bound);
                report.line(format!("push {x} len={}", list.len()))?;
                report.check(
                    loads.max_load() <= bound,
                    format!("load max={} bound={bound}", loads.max_load()),
                )?;
            }
            MatchOp::Pop => match list.pop() {
                Some(x) => report.line(format!("pop {x} len={}", list.len()))?,
                None => report.line("pop empty")?,
            },
            MatchOp::Assign(x) => {
                let a = m.assign(list.as_slice(), x)?;
                if !list.contains(x) {
                    report.line(format!("assign {x} absent"))?;
                    continue;
                }
                report.line(format!(
                    "assign {x} slots={} iters={}",
                    join(a.slots.iter().copied()),
                    a.iterations
                ))?;
                report.check(
                    rat(a.slots.len()) >= quality,
                    format!(
                        "quality size={} bound={}",
                        a.slots.len(),
                        fmt_exact(&quality)
                    ),
                )?;
                let max_iters = ceil_log2(list.len() as u64) as usize;
                report.check(
                    a.iterations <= max_iters,
                    format!("iterations {}<={max_iters}", a.iterations),
                )?;
                let halving = a.core_sizes.windows(2).all(|w| 2 * w[1] <= w[0]);
                report.check(
                    halving,
                    format!("core_halving sizes={}", join(a.core_sizes.iter().copied())),
                )?;
            }
        }
    }
    Ok(report.ok)
}

fn noshare(
    g: BipartiteGraph,
    params: MatchParams,
    hash: &HashArgs,
) -> Result<NoShareMatcher, CliError> {
    let h = hash.hash_eps.unwrap_or(params.epsilon);
    Ok(NoShareMatcher::new(g, params, h, hash.field_order)?)
}

fn describe(m: &NoShareMatcher, report: &mut Report<'_>) -> Result<(), CliError> {
    let tg = m.graph();
    report.line(format!("field {}", tg.field().spec_line()))?;
    report.line(format!(
        "label_bits={} degree={} right_count={} sharing_bound={} loss_bound={}",
        tg.label_bits(),
        tg.degree(),
        tg.right_count(),
        m.sharing_bound(),
        fmt_exact(&m.loss_bound())
    ))
}

fn transform(a: &TransformArgs, out: &mut dyn Write) -> Outcome {
    let g = load_graph(&a.graph)?;
    let params = match_params(&a.params, a.params.capacity)?;
    let m = noshare(g, params, &a.hash)?;
    let mut report = Report::new(out);
    describe(&m, &mut report)?;
    let Some(list) = a.list.as_ref().map(|l| &l.0) else {
        return Ok(true);
    };
    let tg = m.graph();
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    let mut clash = None;
    let mut seen = BTreeSet::new();
    for &x in list {
        if !seen.insert(x) {
            continue;
        }
        let f = m.assign_noshare(list, x)?;
        let mut triples = Vec::with_capacity(f.slots.len());
        for &s in &f.slots {
            let tr = tg.transformed_neighbor(x, s)?;
            // parallel base edges give the same node twice to one element
            if let Some(prev) = owner.insert(tg.right_id(tr), x).filter(|&p| p != x) {
                clash.get_or_insert((prev, x, tr));
            }
            triples.push(tr.to_string());
        }
        report.line(format!("assign {x} triples={}", triples.join(",")))?;
        let need = retained(m.hash_epsilon(), (f.base.slots.len() * tg.t()) as u64);
        report.check(
            rat(f.slots.len()) >= need,
            format!(
                "count {x} size={} bound={}",
                f.slots.len(),
                fmt_exact(&need)
            ),
        )?;
    }
    match clash {
        None => report.check(true, format!("disjoint nodes={}", owner.len()))?,
        Some((a, b, tr)) => report.check(false, format!("disjoint shared={tr} by={a},{b}"))?,
    }
    Ok(report.ok)
}

fn dict(a: &DictArgs, out: &mut dyn Write) -> Outcome {
    let g = load_graph(&a.graph)?;
    let universe = g.left_count();
    let params = MatchParams::new(a.capacity + 1, a.eps, a.share_bound)?;
    let mode = match a.mode {
        StoreMode::Dynamic => Mode::Dynamic,
        StoreMode::Stack => Mode::Stack,
    };
    let store = OneProbeStore::new(noshare(g, params, &a.hash)?, a.capacity, mode)?;
    let ops = parse_dict(&read(&a.trace)?)?;
    let bound = store.error_bound();
    let mut report = Report::new(out);
    describe(store.matcher(), &mut report)?;
    report.line(format!(
        "store K={} mode={mode} bound={}",
        a.capacity,
        fmt_exact(&bound)
    ))?;

    for (step, op) in ops.into_iter().enumerate() {
        let step = step + 1;
        let (name, x, result) = match op {
            DictOp::Query(x, probe) => {
                let (yes, pos) = store.query(x, probe)?;
                let answer = if yes { "yes" } else { "no" };
                report.line(format!("query {x} probe={probe} pos={pos} answer={answer}"))?;
                continue;
            }
            DictOp::QueryAll(x) => {
                let e = store.exact_error(x)?;
                report.check(
                    e <= bound,
                    format!(
                        "query {x} error={} bound={}",
                        fmt_exact(&e),
                        fmt_exact(&bound)
                    ),
                )?;
                continue;
            }
            DictOp::Insert(x) => {
                let before = store.table_snapshot();
                let r = store.insert(x);
                ("insert", x, r.map(|_| before))
            }
            DictOp::Delete(x) => {
                let before = store.table_snapshot();
                let r = store.delete(x);
                ("delete", x, r.map(|_| before))
            }
        };
        let before = match result {
            Ok(before) => before,
            Err(e @ (Error::CapacityExceeded { .. } | Error::Discipline(_))) => {
                report.line(format!("{name} {x} rejected: {e}"))?;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let after = store.table_snapshot();
        let footprint = store.footprint(x)?;
        let flipped: Vec<usize> = (0..store.matcher().right_count())
            .filter(|&p| (before[p / 64] ^ after[p / 64]) >> (p % 64) & 1 == 1)
            .collect();
        report.line(format!("{name} {x} flipped={}", flipped.len()))?;
        report.check(
            flipped.iter().all(|p| footprint.contains(p)),
            format!("locality step={step}"),
        )?;
        if a.exact {
            let mut worst = (Rational::from_integer(0), 0);
            for y in 0..universe {
                let e = store.exact_error(y)?;
                if e > worst.0 {
                    worst = (e, y);
                }
            }
            report.check(
                worst.0 <= bound,
                format!(
                    "exact_error step={step} max={} at={} bound={}",
                    fmt_exact(&worst.0),
                    worst.1,
                    fmt_exact(&bound)
                ),
            )?;
            let mut owned = BTreeSet::new();
            let mut disjoint = true;
            for e in store.state() {
                for p in store.footprint(e.element)? {
                    disjoint &= owned.insert(p);
                }
            }
            report.check(disjoint, format!("disjoint step={step}"))?;
        }
    }
    report.line(format!(
        "size_bits={} popcount={}",
        store.size_bits(),
        store.popcount()
    ))?;
    if let Some(path) = &a.snapshot {
        std::fs::write(path, store.snapshot()).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    Ok(report.ok)
}

fn route(a: &RouteArgs, out: &mut dyn Write) -> Outcome {
    let g = load_graph(&a.graph)?;
    let params = match_params(&a.params, a.params.capacity)?;
    let net = Network::new(noshare(g, params, &a.hash)?, a.params.capacity);
    let ops = parse_route(&read(&a.trace)?)?;
    let mut report = Report::new(out);
    describe(net.matcher(), &mut report)?;
    for w in net.warnings() {
        report.line(format!("warning {w}"))?;
    }
    let mut session = net.session();
    for op in ops {
        let (u, v, result) = match op {
            RouteOp::Disconnect => {
                match session.disconnect() {
                    Some(p) => report.line(format!("disconnect {} {}", p.input, p.output))?,
                    None => report.line("disconnect none")?,
                }
                continue;
            }
            RouteOp::Connect(u, v) => (u, v, session.route(u, v)),
            RouteOp::ConnectRandom(u, v, seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (u, v, session.route_probabilistic(u, v, &mut rng))
            }
        };
        match result {
            Ok(path) => report.line(path.to_string())?,
            Err(e @ (Error::CapacityExceeded { .. } | Error::DuplicateTerminal(_))) => {
                report.line(format!("connect {u} {v} rejected: {e}"))?
            }
            Err(e) => return Err(e.into()),
        }
    }
    let m = net.matcher();
    let formula =
        2 * net.terminal_count() as u128 * m.degree() as u128 + (m.right_count() as u128).pow(2);
    report.line(format!(
        "network N={} degree={} middle={} bandwidth={}",
        net.terminal_count(),
        m.degree(),
        net.middle_width(),
        net.bandwidth()
    ))?;
    report.check(
        net.edge_count() == formula,
        format!("edge_count edges={} formula=2ND'+|W|^2", net.edge_count()),
    )?;
    match verify_disjoint(session.paths()) {
        Ok(()) => report.check(true, format!("disjoint paths={}", session.paths().len()))?,
        Err(v) => report.check(false, format!("disjoint conflict={v}"))?,
    }
    Ok(report.ok)
}
