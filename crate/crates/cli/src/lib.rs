//! Solver selection and output for the `steiner` binary.

use anyhow::{bail, Context, Result};
use clap::ValueEnum;

use steiner_core::connecting::solve_via_multiway_cut_threads;
use steiner_core::decomposition::{
    convert_hat_decomposition, decompose_from_multiway_cut, to_nice, DecompositionKind,
    TreeKFreeDecomposition, TriangleFreeDecomposition,
};
use steiner_core::dp;
use steiner_core::exact::{brute_force_steiner, dreyfus_wagner};
use steiner_core::instance::{format_solution, Instance};
use steiner_core::multiway::{default_multiway_cut, minimum_multiway_cut, MultiwayCut};
use steiner_core::verify::verify_solution;
use steiner_core::{Cost, Subgraph, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverKind {
    /// Dreyfus–Wagner subset dynamic program.
    Dw,
    /// Matching over S-connecting systems of a multiway cut.
    Mwc,
    /// Rank-based dynamic program over a tree K-free decomposition.
    Kfree,
    /// Exhaustive search over vertex subsets (16 vertices at most).
    Brute,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub solver: SolverKind,
    /// A multiway cut to use instead of searching for one.
    pub cut: Option<VertexSet>,
    /// A decomposition for `kfree`, of the graph itself or of its hat graph.
    pub decomposition: Option<(DecompositionKind, TreeKFreeDecomposition)>,
    /// Track an explicit tree in `kfree`; the other solvers always do.
    pub witness: bool,
    /// Largest cut size tried by the exhaustive cut search.
    pub budget: usize,
    pub verify: bool,
    pub threads: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            solver: SolverKind::Dw,
            cut: None,
            decomposition: None,
            witness: false,
            budget: 4,
            verify: false,
            threads: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub cost: Cost,
    pub tree: Option<Subgraph>,
    /// Human-readable notes for stderr, such as which cut was used.
    pub notes: Vec<String>,
}

impl Report {
    pub fn render(&self) -> String {
        format_solution(self.cost, self.tree.as_ref())
    }

    /// 0 for a solution, 2 when the terminals cannot be connected.
    pub fn exit_code(&self) -> i32 {
        if self.cost.is_finite() {
            0
        } else {
            2
        }
    }
}

/// The supplied cut, or the exhaustive search within the budget, or the
/// fallback of all terminals but the largest.
pub fn cut_for(inst: &Instance, config: &SolverConfig, notes: &mut Vec<String>) -> Result<MultiwayCut> {
    let (g, k) = (&inst.graph, &inst.terminals);
    if let Some(v) = &config.cut {
        let cut = MultiwayCut::checked(g, k, v.clone()).context("multiway-cut: supplied cut")?;
        notes.push(format!("using supplied cut of size {}", cut.len()));
        return Ok(cut);
    }
    match minimum_multiway_cut(g, k, config.budget) {
        Some(cut) => {
            notes.push(format!("minimum cut of size {}", cut.len()));
            Ok(cut)
        }
        None => {
            let cut = default_multiway_cut(g, k);
            notes.push(format!(
                "no cut within budget {}, falling back to {} terminals",
                config.budget,
                cut.len()
            ));
            Ok(cut)
        }
    }
}

fn decomposition_for(
    inst: &Instance,
    config: &SolverConfig,
    notes: &mut Vec<String>,
) -> Result<TreeKFreeDecomposition> {
    let (g, k) = (&inst.graph, &inst.terminals);
    match &config.decomposition {
        Some((DecompositionKind::KFree, d)) => {
            notes.push(format!("using supplied decomposition of width {}", d.width()));
            Ok(d.clone())
        }
        Some((DecompositionKind::TriangleFree, d)) => {
            let dhat = TriangleFreeDecomposition(d.clone());
            let out = convert_hat_decomposition(g, k, &dhat).context("kfree-decomposition: hat conversion")?;
            notes.push(format!(
                "converted hat decomposition of width {} to width {}",
                dhat.width(),
                out.width()
            ));
            Ok(out)
        }
        None => {
            let cut = cut_for(inst, config, notes)?;
            let d = decompose_from_multiway_cut(g, k, &cut).context("kfree-decomposition: from cut")?;
            notes.push(format!("decomposition from cut has width {}", d.width()));
            Ok(d)
        }
    }
}

/// Runs the configured pipeline and checks the tree it returns.
pub fn run(inst: &Instance, config: &SolverConfig) -> Result<Report> {
    let (g, k) = (&inst.graph, &inst.terminals);
    let mut notes = Vec::new();
    let (cost, tree) = match config.solver {
        SolverKind::Dw => {
            let r = dreyfus_wagner(g, k).context("exact-steiner: dreyfus-wagner")?;
            (r.cost, Some(r.tree))
        }
        SolverKind::Brute => {
            let r = brute_force_steiner(g, k).context("exact-steiner: brute force")?;
            (r.cost, Some(r.tree))
        }
        SolverKind::Mwc => {
            let cut = cut_for(inst, config, &mut notes)?;
            let r = solve_via_multiway_cut_threads(g, k, &cut, config.threads.max(1))
                .context("connecting-systems: solver")?;
            (r.cost, Some(r.tree))
        }
        SolverKind::Kfree => {
            let d = decomposition_for(inst, config, &mut notes)?;
            let nice = to_nice(g, k, &d).context("kfree-decomposition: nice form")?;
            let s = dp::solve(g, k, &nice, config.witness).context("kfree-dp: solver")?;
            (s.cost, s.tree)
        }
    };
    let tree = if cost.is_finite() { tree } else { None };
    if let Some(t) = &tree {
        let r = steiner_core::exact::SteinerResult { cost, tree: t.clone() };
        r.check(g, k).context("witness check")?;
    }
    let report = Report { cost, tree, notes };
    if config.verify {
        let text = report.render();
        let checked = verify_solution(g, k, &text, report.tree.is_some()).context("verify")?;
        if checked != report.cost {
            bail!("verify: re-read VALUE {checked} differs from {}", report.cost);
        }
    }
    Ok(report)
}
