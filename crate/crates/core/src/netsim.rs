//! Depth-3 non-blocking network built from two copies of a matching graph.
//!
//! Inputs are the left side of the first copy, outputs the left side of the
//! second, and every right node of the first copy is joined to every right
//! node of the second. A request `(u, v)` is routed through a node assigned
//! to `u` in the first copy and a node assigned to `v` in the second.

use std::collections::BTreeMap;

use rand::Rng;

use crate::disjointify::OnlineMatcher;
use crate::error::{Error, Result};

/// A network vertex, tagged by layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Input(usize),
    First(usize),
    Second(usize),
    Output(usize),
}

impl std::fmt::Display for Vertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Vertex::Input(i) => write!(f, "in{i}"),
            Vertex::First(i) => write!(f, "w{i}"),
            Vertex::Second(i) => write!(f, "w'{i}"),
            Vertex::Output(i) => write!(f, "out{i}"),
        }
    }
}

/// `u → w → w' → v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Path {
    pub input: usize,
    pub first: usize,
    pub second: usize,
    pub output: usize,
}

impl Path {
    pub fn vertices(&self) -> [Vertex; 4] {
        [
            Vertex::Input(self.input),
            Vertex::First(self.first),
            Vertex::Second(self.second),
            Vertex::Output(self.output),
        ]
    }

    /// Number of edges; always 3.
    pub fn len(&self) -> usize {
        self.vertices().len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl std::fmt::Display for Path {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "path {} {} {} {}",
            self.input, self.first, self.second, self.output
        )
    }
}

/// Checks that no vertex occurs in two paths; returns the first repeat.
pub fn verify_disjoint(paths: &[Path]) -> Result<(), Vertex> {
    let mut seen: BTreeMap<Vertex, usize> = BTreeMap::new();
    for (i, path) in paths.iter().enumerate() {
        for v in path.vertices() {
            if seen.insert(v, i).is_some() {
                return Err(v);
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct Network<M> {
    matcher: M,
    bandwidth: usize,
    warnings: Vec<String>,
}

impl<M: OnlineMatcher> Network<M> {
    pub fn new(matcher: M, bandwidth: usize) -> Self {
        let mut warnings = Vec::new();
        if bandwidth > matcher.capacity() {
            warnings.push(format!(
                "bandwidth {bandwidth} exceeds matching capacity {}; disjointness is not guaranteed",
                matcher.capacity()
            ));
        }
        Self {
            matcher,
            bandwidth,
            warnings,
        }
    }

    pub fn matcher(&self) -> &M {
        &self.matcher
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn terminal_count(&self) -> usize {
        self.matcher.left_count()
    }

    pub fn middle_width(&self) -> usize {
        self.matcher.right_count()
    }

    /// `2·N·D' + |W|²`.
    pub fn edge_count(&self) -> u128 {
        let n = self.terminal_count() as u128;
        let d = self.matcher.degree() as u128;
        let w = self.middle_width() as u128;
        2 * n * d + w * w
    }

    pub fn session(&self) -> RouteSession<'_, M> {
        RouteSession {
            net: self,
            inputs: Vec::new(),
            outputs: Vec::new(),
            paths: Vec::new(),
        }
    }
}

/// Routing state: the two request lists and the active paths.
#[derive(Debug, Clone)]
pub struct RouteSession<'n, M> {
    net: &'n Network<M>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    paths: Vec<Path>,
}

impl<M: OnlineMatcher> RouteSession<'_, M> {
    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    fn admit(&self, u: usize, v: usize) -> Result<()> {
        let n = self.net.terminal_count();
        if u >= n || v >= n {
            return Err(Error::InvalidParameter(format!(
                "terminals ({u}, {v}) outside 0..{n}"
            )));
        }
        if self.paths.len() >= self.net.bandwidth {
            return Err(Error::CapacityExceeded {
                len: self.paths.len() + 1,
                capacity: self.net.bandwidth,
            });
        }
        if self.inputs.contains(&u) {
            return Err(Error::DuplicateTerminal(format!("input {u}")));
        }
        if self.outputs.contains(&v) {
            return Err(Error::DuplicateTerminal(format!("output {v}")));
        }
        Ok(())
    }

    fn lowest_assigned(&self, list: &[usize], x: usize) -> Result<usize> {
        let m = &self.net.matcher;
        let mut best: Option<usize> = None;
        for slot in m.assign_slots(list, x)? {
            let p = m.neighbor(x, slot)?;
            best = Some(best.map_or(p, |b| b.min(p)));
        }
        best.ok_or_else(|| Error::InvalidGraph(format!("no node assigned to terminal {x}")))
    }

    /// Routes through the lowest-id assigned node on each side.
    pub fn route(&mut self, u: usize, v: usize) -> Result<Path> {
        self.admit(u, v)?;
        self.inputs.push(u);
        self.outputs.push(v);
        let picked = self
            .lowest_assigned(&self.inputs, u)
            .and_then(|w| Ok((w, self.lowest_assigned(&self.outputs, v)?)));
        match picked {
            Ok((first, second)) => {
                let path = Path {
                    input: u,
                    first,
                    second,
                    output: v,
                };
                self.paths.push(path);
                Ok(path)
            }
            Err(e) => {
                self.inputs.pop();
                self.outputs.pop();
                Err(e)
            }
        }
    }

    /// Routes through a uniformly random neighbor on each side, without
    /// computing any assignment.
    pub fn route_probabilistic(&mut self, u: usize, v: usize, rng: &mut impl Rng) -> Result<Path> {
        self.admit(u, v)?;
        let m = &self.net.matcher;
        let degree = m.degree();
        let first = m.neighbor(u, rng.random_range(0..degree))?;
        let second = m.neighbor(v, rng.random_range(0..degree))?;
        self.inputs.push(u);
        self.outputs.push(v);
        let path = Path {
            input: u,
            first,
            second,
            output: v,
        };
        self.paths.push(path);
        Ok(path)
    }

    /// Tears down the most recent request.
    pub fn disconnect(&mut self) -> Option<Path> {
        self.inputs.pop();
        self.outputs.pop();
        self.paths.pop()
    }
}
