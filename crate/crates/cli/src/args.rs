use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use expander_match::certify::DEFAULT_BUDGET;
use expander_match::ratio::parse_exact;
use expander_match::Rational;

const AFTER_HELP: &str = "\
Formats:
  graph file   header `N M D`, then N lines of D right ids (edge slots in order);
               `#` starts a comment
  match trace  `push <id>`, `pop`, `assign <id>`
  dict trace   `insert <id>`, `delete <id>`, `query <id> <probe>`, `query <id> all`
  route trace  `connect <u> <v>`, `disconnect`, `connect? <u> <v> seed=<s>`
Rationals are written `num/den`. Single-dash long flags (-eps 1/8) are accepted.
Exit codes: 0 success, 1 a guarantee failed, 2 usage or input error, 3 budget exceeded.";

#[derive(Debug, Parser)]
#[command(name = "exmatch", version, about = "Online matching on certified lossless expanders", after_help = AFTER_HELP)]
pub struct Cli {
    /// Cap on subsets (or game states) any exhaustive check may visit.
    #[arg(long, global = true, env = "EXMATCH_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for a certified random graph.
    Gen(GenArgs),
    /// Certify a graph file.
    Verify(VerifyArgs),
    /// Replay a request-list trace through the online matcher.
    Match(MatchArgs),
    /// Describe the hashed graph and its disjoint assignments.
    Transform(TransformArgs),
    /// Replay a one-probe dictionary trace.
    Dict(DictArgs),
    /// Replay a routing trace on the depth-3 network.
    Route(RouteArgs),
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_exact(s).map_err(|e| e.to_string())
}

/// Comma-separated node ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdList(pub Vec<usize>);

fn id_list(s: &str) -> Result<IdList, String> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| format!("not a node id: {t:?}"))
        })
        .collect::<Result<_, _>>()
        .map(IdList)
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(short = 'N')]
    pub n_left: usize,
    #[arg(short = 'M')]
    pub n_right: usize,
    #[arg(short = 'D')]
    pub degree: usize,
    #[arg(short = 'K')]
    pub capacity: usize,
    #[arg(long, value_parser = rational)]
    pub eps: Rational,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub max_tries: u32,
    /// Certify `(r, K, eps)` bounded right degree instead of expansion.
    #[arg(short = 'r')]
    pub share_bound: Option<usize>,
    /// Write the graph here instead of stdout.
    #[arg(short = 'o', long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub graph: PathBuf,
    #[arg(short = 'K')]
    pub capacity: usize,
    #[arg(long, value_parser = rational)]
    pub eps: Option<Rational>,
    /// Exact minimum expansion ratio.
    #[arg(long)]
    pub expansion: bool,
    /// Exact bounded-right-degree certificate for share bound `-r`.
    #[arg(long)]
    pub degree: bool,
    #[arg(short = 'r', default_value_t = 1)]
    pub share_bound: usize,
    /// Search the online matching game for an adversary strategy.
    #[arg(long)]
    pub online: bool,
    #[arg(long, default_value_t = 1)]
    pub ell: usize,
    /// Offline matching of a fixed set.
    #[arg(long, value_parser = id_list)]
    pub offline: Option<IdList>,
    #[arg(long, default_value_t = 1)]
    pub rounds: usize,
    /// Condenser check with entropy loss `-e` up to source size `2^kmax`.
    #[arg(long)]
    pub condenser: bool,
    #[arg(short = 'e', default_value_t = 0)]
    pub loss: u32,
    #[arg(long, default_value_t = 0)]
    pub kmax: u32,
}

#[derive(Debug, Args)]
pub struct MatchParamArgs {
    #[arg(short = 'K')]
    pub capacity: usize,
    #[arg(long, value_parser = rational)]
    pub eps: Rational,
    #[arg(short = 'r', default_value_t = 1)]
    pub share_bound: usize,
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub trace: PathBuf,
    #[command(flatten)]
    pub params: MatchParamArgs,
}

#[derive(Debug, Args)]
pub struct HashArgs {
    /// Loss allowed to the hashing step; defaults to `eps`.
    #[arg(long, value_parser = rational)]
    pub hash_eps: Option<Rational>,
    /// Field order override (power of two).
    #[arg(short = 't')]
    pub field_order: Option<u32>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    pub graph: PathBuf,
    #[command(flatten)]
    pub params: MatchParamArgs,
    #[command(flatten)]
    pub hash: HashArgs,
    /// Request list whose disjoint assignments are printed.
    #[arg(long, value_parser = id_list)]
    pub list: Option<IdList>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StoreMode {
    Dynamic,
    Stack,
}

#[derive(Debug, Args)]
pub struct DictArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub trace: PathBuf,
    /// Store capacity; the matching is built for `K + 1`.
    #[arg(short = 'K')]
    pub capacity: usize,
    #[arg(long, value_parser = rational)]
    pub eps: Rational,
    #[arg(short = 'r', default_value_t = 1)]
    pub share_bound: usize,
    #[command(flatten)]
    pub hash: HashArgs,
    #[arg(long, value_enum, default_value_t = StoreMode::Dynamic)]
    pub mode: StoreMode,
    /// After every update, report the exact error of every left id.
    #[arg(long)]
    pub exact: bool,
    /// Write the final store snapshot here.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RouteArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub trace: PathBuf,
    #[command(flatten)]
    pub params: MatchParamArgs,
    #[command(flatten)]
    pub hash: HashArgs,
}

/// Rewrites `-eps` style flags to `--eps`; single-letter flags are kept.
pub fn normalize<I, T>(args: I) -> Vec<std::ffi::OsString>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString>,
{
    args.into_iter()
        .map(|a| {
            let a: std::ffi::OsString = a.into();
            match a.to_str() {
                Some(s) if is_single_dash_long(s) => format!("-{s}").into(),
                _ => a,
            }
        })
        .collect()
}

fn is_single_dash_long(s: &str) -> bool {
    let Some(rest) = s.strip_prefix('-') else {
        return false;
    };
    let name = rest.split('=').next().unwrap_or("");
    !rest.starts_with('-')
        && name.len() >= 2
        && name.chars().all(|c| c.is_ascii_lowercase() || c == '-')
}
