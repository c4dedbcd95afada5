//! Textual graph specifications accepted on the command line.

use std::fs::File;
use std::io::BufReader;
use std::str::FromStr;

use relmass::graph::{build_complete, build_cycle, build_hypercube, build_pyramid_cube};
use relmass::lamplighter::{build_lamplighter, uv_vertices, LamplighterParams};
use relmass::{Error, Result, WeightedGraph};

/// One of `hypercube:D`, `cycle:N`, `complete:N`, `pyramid-cube`,
/// `lamplighter:D:EPS` or `file:PATH` (edge list).
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Hypercube(u32),
    Cycle(usize),
    Complete(usize),
    PyramidCube,
    Lamplighter(u32, f64),
    File(String),
}

impl FromStr for GraphSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |x: &str| x.parse::<usize>().map_err(|e| format!("bad number {x:?} in graph spec: {e}"));
        match parts.as_slice() {
            ["hypercube", d] => Ok(Self::Hypercube(num(d)? as u32)),
            ["cycle", n] => Ok(Self::Cycle(num(n)?)),
            ["complete", n] => Ok(Self::Complete(num(n)?)),
            ["pyramid-cube"] => Ok(Self::PyramidCube),
            ["lamplighter", d, eps] => {
                let eps = eps.parse::<f64>().map_err(|e| format!("bad toggle rate {eps:?}: {e}"))?;
                Ok(Self::Lamplighter(num(d)? as u32, eps))
            }
            ["file", ..] => Ok(Self::File(s["file:".len()..].to_string())),
            _ => Err(format!(
                "unknown graph spec {s:?}; expected hypercube:D, cycle:N, complete:N, pyramid-cube, \
                 lamplighter:D:EPS or file:PATH"
            )),
        }
    }
}

impl GraphSpec {
    pub fn build(&self) -> Result<WeightedGraph> {
        match self {
            Self::Hypercube(d) => build_hypercube(*d),
            Self::Cycle(n) => build_cycle(*n),
            Self::Complete(n) => build_complete(*n),
            Self::PyramidCube => Ok(build_pyramid_cube()),
            Self::Lamplighter(d, eps) => build_lamplighter(LamplighterParams::new(*d, *eps)?),
            Self::File(path) => {
                let file = File::open(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{path}: {e}"))))?;
                WeightedGraph::read_edge_list(BufReader::new(file))
            }
        }
    }

    /// Natural vertex pair when the user gives none.
    pub fn default_pair(&self) -> Result<Option<(usize, usize)>> {
        Ok(match self {
            Self::Lamplighter(d, _) => Some(uv_vertices(*d)?),
            Self::PyramidCube => Some((relmass::graph::pyramid::TOP[0], relmass::graph::pyramid::APEX_TOP)),
            _ => None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!("hypercube:3".parse(), Ok(GraphSpec::Hypercube(3)));
        assert_eq!("cycle:12".parse(), Ok(GraphSpec::Cycle(12)));
        assert_eq!("pyramid-cube".parse(), Ok(GraphSpec::PyramidCube));
        assert_eq!("lamplighter:2:0.001".parse(), Ok(GraphSpec::Lamplighter(2, 0.001)));
        assert_eq!("file:a:b.txt".parse(), Ok(GraphSpec::File("a:b.txt".into())));
        assert!("torus:3".parse::<GraphSpec>().is_err());
        assert!("cycle:x".parse::<GraphSpec>().is_err());
    }

    #[test]
    fn builds() {
        assert_eq!(GraphSpec::Hypercube(3).build().unwrap().n(), 8);
        assert_eq!(GraphSpec::Lamplighter(1, 0.5).build().unwrap().n(), 8);
        assert!(GraphSpec::File("/nonexistent/graph".into()).build().is_err());
    }
}
