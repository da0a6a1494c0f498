//! Line-oriented trace files. Blank lines and `#` comments are skipped;
//! errors carry the 1-based line number.

use expander_match::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchOp {
    Push(usize),
    Pop,
    Assign(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DictOp {
    Insert(usize),
    Delete(usize),
    Query(usize, usize),
    QueryAll(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RouteOp {
    Connect(usize, usize),
    Disconnect,
    ConnectRandom(usize, usize, u64),
}

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then(|| (i + 1, line.split_whitespace().collect()))
    })
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, Error> {
    s.parse()
        .map_err(|_| err(line, format!("expected a number, got {s:?}")))
}

fn arity(line: usize, words: &[&str], n: usize) -> Result<(), Error> {
    if words.len() != n + 1 {
        return Err(err(line, format!("`{}` takes {n} argument(s)", words[0])));
    }
    Ok(())
}

pub fn parse_match(text: &str) -> Result<Vec<MatchOp>, Error> {
    lines(text)
        .map(|(line, w)| match w[0] {
            "push" => arity(line, &w, 1).and_then(|_| Ok(MatchOp::Push(num(line, w[1])?))),
            "pop" => arity(line, &w, 0).map(|_| MatchOp::Pop),
            "assign" => arity(line, &w, 1).and_then(|_| Ok(MatchOp::Assign(num(line, w[1])?))),
            other => Err(err(line, format!("unknown command {other:?}"))),
        })
        .collect()
}

pub fn parse_dict(text: &str) -> Result<Vec<DictOp>, Error> {
    lines(text)
        .map(|(line, w)| match w[0] {
            "insert" => arity(line, &w, 1).and_then(|_| Ok(DictOp::Insert(num(line, w[1])?))),
            "delete" => arity(line, &w, 1).and_then(|_| Ok(DictOp::Delete(num(line, w[1])?))),
            "query" => {
                arity(line, &w, 2)?;
                let x = num(line, w[1])?;
                if w[2] == "all" {
                    Ok(DictOp::QueryAll(x))
                } else {
                    Ok(DictOp::Query(x, num(line, w[2])?))
                }
            }
            other => Err(err(line, format!("unknown command {other:?}"))),
        })
        .collect()
}

pub fn parse_route(text: &str) -> Result<Vec<RouteOp>, Error> {
    lines(text)
        .map(|(line, w)| match w[0] {
            "connect" => {
                arity(line, &w, 2)?;
                Ok(RouteOp::Connect(num(line, w[1])?, num(line, w[2])?))
            }
            "disconnect" => arity(line, &w, 0).map(|_| RouteOp::Disconnect),
            "connect?" => {
                arity(line, &w, 3)?;
                let seed = w[3]
                    .strip_prefix("seed=")
                    .ok_or_else(|| err(line, "expected seed=<s>"))?;
                Ok(RouteOp::ConnectRandom(
                    num(line, w[1])?,
                    num(line, w[2])?,
                    num(line, seed)?,
                ))
            }
            other => Err(err(line, format!("unknown command {other:?}"))),
        })
        .collect()
}
