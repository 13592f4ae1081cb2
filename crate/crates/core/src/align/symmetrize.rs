use std::fmt;
use std::str::FromStr;

use super::links::AlignmentLinks;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetrizationHeuristic {
    Intersection,
    Union,
    Grow,
    GrowDiag,
    GrowDiagFinal,
    GrowDiagFinalAnd,
}

impl SymmetrizationHeuristic {
    pub const ALL: [SymmetrizationHeuristic; 6] = [
        Self::Intersection,
        Self::Union,
        Self::Grow,
        Self::GrowDiag,
        Self::GrowDiagFinal,
        Self::GrowDiagFinalAnd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Intersection => "intersection",
            Self::Union => "union",
            Self::Grow => "grow",
            Self::GrowDiag => "grow-diag",
            Self::GrowDiagFinal => "grow-diag-final",
            Self::GrowDiagFinalAnd => "grow-diag-final-and",
        }
    }
}

impl fmt::Display for SymmetrizationHeuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SymmetrizationHeuristic {
    type Err = Error;

    /// Accepts the hyphenated names and their underscore spellings.
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|h| h.name() == s || h.name().replace('-', "_") == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown symmetrization heuristic {s:?}")))
    }
}

const NEIGHBORS: [(isize, isize); 8] = [(-1, 0), (0, -1), (1, 0), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1)];

struct Grid {
    cols: usize,
    cells: Vec<bool>,
    src_aligned: Vec<usize>,
    tgt_aligned: Vec<usize>,
}

impl Grid {
    fn new(rows: usize, cols: usize) -> Self {
        Grid {
            cols,
            cells: vec![false; rows * cols],
            src_aligned: vec![0; rows],
            tgt_aligned: vec![0; cols],
        }
    }

    fn get(&self, s: usize, t: usize) -> bool {
        self.cells[s * self.cols + t]
    }

    fn add(&mut self, s: usize, t: usize) {
        let c = &mut self.cells[s * self.cols + t];
        if !*c {
            *c = true;
            self.src_aligned[s] += 1;
            self.tgt_aligned[t] += 1;
        }
    }
}

/// Combines a forward and a backward alignment of the same pair.
pub fn symmetrize(
    forward: &AlignmentLinks,
    backward: &AlignmentLinks,
    heuristic: SymmetrizationHeuristic,
) -> Result<AlignmentLinks> {
    let (rows, cols) = (forward.source_len(), forward.target_len());
    if backward.source_len() != rows || backward.target_len() != cols {
        return Err(Error::Dimension(format!(
            "forward alignment is {rows}x{cols}, backward is {}x{}",
            backward.source_len(),
            backward.target_len()
        )));
    }
    let mut union = Grid::new(rows, cols);
    for (s, t) in forward.iter().chain(backward.iter()) {
        union.add(s, t);
    }
    let mut a = Grid::new(rows, cols);
    for (s, t) in forward.iter() {
        if backward.contains(s, t) {
            a.add(s, t);
        }
    }
    use SymmetrizationHeuristic as H;
    let neighbors: &[(isize, isize)] = match heuristic {
        H::Intersection => &[],
        H::Union => return Ok(AlignmentLinks::new(rows, cols, forward.iter().chain(backward.iter()))?),
        H::Grow => &NEIGHBORS[..4],
        _ => &NEIGHBORS[..],
    };
    if !neighbors.is_empty() {
        loop {
            let mut added = false;
            for s in 0..rows {
                for t in 0..cols {
                    if !a.get(s, t) {
                        continue;
                    }
                    for &(ds, dt) in neighbors {
                        let (ns, nt) = (s as isize + ds, t as isize + dt);
                        if ns < 0 || nt < 0 || ns as usize >= rows || nt as usize >= cols {
                            continue;
                        }
                        let (ns, nt) = (ns as usize, nt as usize);
                        if !a.get(ns, nt)
                            && union.get(ns, nt)
                            && (a.src_aligned[ns] == 0 || a.tgt_aligned[nt] == 0)
                        {
                            a.add(ns, nt);
                            added = true;
                        }
                    }
                }
            }
            if !added {
                break;
            }
        }
    }
    if matches!(heuristic, H::GrowDiagFinal | H::GrowDiagFinalAnd) {
        let both = heuristic == H::GrowDiagFinalAnd;
        for s in 0..rows {
            for t in 0..cols {
                if !union.get(s, t) || a.get(s, t) {
                    continue;
                }
                let (su, tu) = (a.src_aligned[s] == 0, a.tgt_aligned[t] == 0);
                if (both && su && tu) || (!both && (su || tu)) {
                    a.add(s, t);
                }
            }
        }
    }
    let links = (0..rows).flat_map(|s| (0..cols).map(move |t| (s, t)));
    let kept: Vec<_> = links.filter(|&(s, t)| a.get(s, t)).collect();
    AlignmentLinks::new(rows, cols, kept)
}
