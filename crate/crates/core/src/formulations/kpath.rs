//! k-path through an injective splitter: some member colors the path's
//! nodes with distinct colors, and the path is cut into at most `θ`
//! colorful segments joined by edges.

use smallvec::SmallVec;

use super::{
    compositions, graph_for, subsets_sized, Generator, Instance, Legend, Params, Problem, Terms,
    VariableKey,
};
use crate::bits::{bit, ceil_div, contains, Mask};
use crate::error::{Error, Result};
use crate::solvers::colorful_reach;
use crate::splitters::{compose_splitter, SplitterFamily};

/// Largest `n` accepted; legends grow with the splitter size times `n²`.
pub const KPATH_N_CAP: usize = 16;

pub(super) struct KPath {
    n: usize,
    theta: usize,
    k: usize,
    /// Colors per segment.
    b: usize,
    /// `None` when `k = 0`, where the formulation is the constant 1 over
    /// the edge variables alone.
    family: Option<SplitterFamily>,
}

impl KPath {
    pub(super) fn new(p: &Params) -> Result<Self> {
        let k = p.k.expect("checked");
        if p.n > KPATH_N_CAP {
            return Err(Error::param(format!(
                "k-path: n = {} exceeds the desk-scale cap {KPATH_N_CAP}",
                p.n
            )));
        }
        if k > p.n {
            return Err(Error::param(format!("k-path: k = {k} exceeds n = {}", p.n)));
        }
        let family = if k == 0 {
            None
        } else {
            let family = compose_splitter(p.n, k, p.theta)?.family.deduplicated();
            if family.range() > Mask::BITS as usize {
                return Err(Error::param(format!(
                    "splitter range {} is too wide",
                    family.range()
                )));
            }
            Some(family)
        };
        Ok(Self {
            n: p.n,
            theta: p.theta,
            k,
            b: ceil_div(k.max(1), p.theta),
            family,
        })
    }

    fn segments(&self) -> usize {
        self.theta.min(self.k)
    }

    /// Segments of sizes `sizes` with pairwise disjoint color sets, each
    /// joined to the previous one by an edge.
    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        legend: &Legend,
        f: usize,
        coloring: &[u32],
        sizes: &[usize],
        free: Mask,
        prev: Option<usize>,
        vars: &mut SmallVec<[u32; 8]>,
        out: &mut Terms,
    ) {
        let Some((&size, rest)) = sizes.split_first() else {
            out.add(vars);
            return;
        };
        for c in subsets_sized(free, size, size) {
            let members: SmallVec<[usize; 16]> = (0..self.n)
                .filter(|&x| contains(c, coloring[x] as usize))
                .collect();
            for &u in &members {
                for &v in &members {
                    let ok = if size == 1 {
                        u == v
                    } else {
                        coloring[u] != coloring[v]
                    };
                    if !ok {
                        continue;
                    }
                    let mark = vars.len();
                    if let Some(p) = prev {
                        vars.push(legend.id(&VariableKey::Edge { u: p, v: u }));
                    }
                    vars.push(legend.id(&VariableKey::KPath { f, c, u, v }));
                    self.extend(legend, f, coloring, rest, free & !c, Some(v), vars, out);
                    vars.truncate(mark);
                }
            }
        }
    }
}

fn image(coloring: &[u32]) -> Mask {
    coloring.iter().fold(0, |acc, &c| acc | bit(c as usize))
}

impl Generator for KPath {
    fn delta(&self) -> u32 {
        (2 * self.theta - 1) as u32
    }

    fn legend(&self) -> Legend {
        let mut legend = Legend::default();
        let members = self.family.as_ref().map_or(&[][..], |f| f.members());
        for (f, coloring) in members.iter().enumerate() {
            let colors = image(coloring);
            for (u, &cu) in coloring.iter().enumerate() {
                let cu = cu as usize;
                legend.push(VariableKey::KPath {
                    f,
                    c: bit(cu),
                    u,
                    v: u,
                });
                for (v, &cv) in coloring.iter().enumerate() {
                    let cv = cv as usize;
                    if cu == cv {
                        continue;
                    }
                    for c in subsets_sized(colors, 2, self.b) {
                        if contains(c, cu) && contains(c, cv) {
                            legend.push(VariableKey::KPath { f, c, u, v });
                        }
                    }
                }
            }
        }
        for u in 0..self.n {
            for v in 0..self.n {
                if u != v {
                    legend.push(VariableKey::Edge { u, v });
                }
            }
        }
        legend
    }

    fn monomials(&self, legend: &Legend) -> Terms {
        let Some(family) = &self.family else {
            let mut out = Terms::default();
            out.add(&[]);
            return out;
        };
        let g = self.segments();
        let shapes: Vec<Vec<usize>> = compositions(self.k - g, g, self.b - 1)
            .into_iter()
            .map(|c| c.into_iter().map(|x| x + 1).collect())
            .collect();
        let tasks: Vec<usize> = (0..family.len()).collect();
        Terms::gather(&tasks, |&f, out| {
            let coloring = &family.members()[f];
            let colors = image(coloring);
            for sizes in &shapes {
                self.extend(
                    legend,
                    f,
                    coloring,
                    sizes,
                    colors,
                    None,
                    &mut SmallVec::new(),
                    out,
                );
            }
        })
    }

    fn assign(&self, legend: &Legend, instance: &Instance) -> Result<Vec<bool>> {
        let g = graph_for(Problem::KPath, instance, self.n)?;
        let members = self.family.as_ref().map_or(&[][..], |f| f.members());
        legend.assign(|key| match *key {
            VariableKey::KPath { f, c, u, v } => {
                Ok(contains(colorful_reach(g, &members[f], c, u), v))
            }
            VariableKey::Edge { u, v } => Ok(g.has_edge(u, v)),
            _ => unreachable!("foreign key {key}"),
        })
    }

    fn splitter(&self) -> Option<&SplitterFamily> {
        self.family.as_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_shapes_cover_k() {
        let p = Params::new(6, 2).with("k", 3).unwrap();
        let kp = KPath::new(&p).unwrap();
        assert_eq!(kp.segments(), 2);
        assert_eq!(kp.b, 2);
        let zero = KPath::new(&Params::new(6, 2).with("k", 0).unwrap()).unwrap();
        assert_eq!(zero.legend().len(), 30);
    }
}
