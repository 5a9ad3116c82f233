//! Weak acyclicity of linear TGDs.
//!
//! Nodes of the dependency graph are predicate positions. For every
//! constraint and every frontier variable `x` occurring at body position `p`:
//! a normal edge goes from `p` to each head position of `x`, and a special
//! edge goes from `p` to each head position holding an existential variable.
//! The set is weakly acyclic iff no cycle passes through a special edge.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::model::{Atom, ModelError, PositiveConstraint, Symbol, Term};

/// `predicate.index`, with `index` counted from zero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Position {
    pub predicate: Symbol,
    pub index: usize,
}

impl fmt::Display for Position {
    /// Positions print 1-based: `q.2` is the second argument of `q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.predicate, self.index + 1)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum EdgeKind {
    Normal,
    Special,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    pub from: Position,
    pub to: Position,
    pub kind: EdgeKind,
    /// First constraint (in input order) that induced the edge.
    pub constraint: Symbol,
}

#[derive(Clone, Debug, Default)]
pub struct DependencyGraph {
    nodes: BTreeSet<Position>,
    edges: Vec<Edge>,
}

fn positions_of<'a>(atom: &'a Atom, var: &Symbol) -> impl Iterator<Item = Position> + 'a {
    let var = Term::Variable(var.clone());
    atom.terms
        .iter()
        .enumerate()
        .filter(move |(_, t)| **t == var)
        .map(move |(index, _)| Position {
            predicate: atom.predicate.clone(),
            index,
        })
}

impl DependencyGraph {
    pub fn build(positives: &[PositiveConstraint]) -> Self {
        let mut nodes = BTreeSet::new();
        let mut seen = BTreeSet::new();
        let mut edges = Vec::new();
        for c in positives {
            for a in [c.body(), c.head()] {
                for index in 0..a.arity() {
                    nodes.insert(Position {
                        predicate: a.predicate.clone(),
                        index,
                    });
                }
            }
            let existential_positions: Vec<Position> = c
                .existentials()
                .iter()
                .flat_map(|z| positions_of(c.head(), z).collect::<Vec<_>>())
                .collect();
            for x in c.frontier() {
                for from in positions_of(c.body(), &x) {
                    let normal = positions_of(c.head(), &x).map(|to| (to, EdgeKind::Normal));
                    let special = existential_positions
                        .iter()
                        .cloned()
                        .map(|to| (to, EdgeKind::Special));
                    for (to, kind) in normal.chain(special).collect::<Vec<_>>() {
                        if seen.insert((from.clone(), to.clone(), kind)) {
                            edges.push(Edge {
                                from: from.clone(),
                                to,
                                kind,
                                constraint: c.id().clone(),
                            });
                        }
                    }
                }
            }
        }
        DependencyGraph { nodes, edges }
    }

    pub fn nodes(&self) -> &BTreeSet<Position> {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn special_edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Special)
    }

    pub fn normal_edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Normal)
    }

    /// The first cycle through a special edge, trying special edges in sorted order.
    pub fn find_special_cycle(&self) -> Option<SpecialCycle> {
        let mut adjacency: BTreeMap<&Position, Vec<&Edge>> = BTreeMap::new();
        for e in &self.edges {
            adjacency.entry(&e.from).or_default().push(e);
        }
        for list in adjacency.values_mut() {
            list.sort();
        }
        let mut specials: Vec<&Edge> = self.special_edges().collect();
        specials.sort();
        for special in specials {
            if let Some(path) = shortest_path(&adjacency, &special.to, &special.from) {
                let mut edges = vec![special.clone()];
                edges.extend(path.into_iter().cloned());
                return Some(SpecialCycle { edges });
            }
        }
        None
    }
}

fn shortest_path<'a>(
    adjacency: &BTreeMap<&Position, Vec<&'a Edge>>,
    start: &Position,
    goal: &Position,
) -> Option<Vec<&'a Edge>> {
    if start == goal {
        return Some(Vec::new());
    }
    let mut came_from: BTreeMap<&Position, &Edge> = BTreeMap::new();
    let mut queue = VecDeque::from([start]);
    let mut visited = BTreeSet::from([start]);
    while let Some(node) = queue.pop_front() {
        for e in adjacency.get(node).into_iter().flatten() {
            if visited.insert(&e.to) {
                came_from.insert(&e.to, e);
                if &e.to == goal {
                    let mut path = Vec::new();
                    let mut cur = goal;
                    while cur != start {
                        let edge = came_from[cur];
                        path.push(edge);
                        cur = &edge.from;
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(&e.to);
            }
        }
    }
    None
}

/// A cycle in the dependency graph whose first edge is special.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpecialCycle {
    pub edges: Vec<Edge>,
}

impl SpecialCycle {
    pub fn special_edge(&self) -> &Edge {
        &self.edges[0]
    }
}

impl fmt::Display for SpecialCycle {
    /// `p.1 =[r1]=> q.2 -[r2]-> p.1`; `=>` marks special edges.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.edges[0].from)?;
        for e in &self.edges {
            match e.kind {
                EdgeKind::Special => write!(f, " =[{}]=> {}", e.constraint, e.to)?,
                EdgeKind::Normal => write!(f, " -[{}]-> {}", e.constraint, e.to)?,
            }
        }
        Ok(())
    }
}

/// Result of the weak-acyclicity test: the graph and, when the test fails,
/// one offending cycle.
#[derive(Clone, Debug)]
pub struct WeakAcyclicity {
    pub graph: DependencyGraph,
    pub cycle: Option<SpecialCycle>,
}

impl WeakAcyclicity {
    pub fn holds(&self) -> bool {
        self.cycle.is_none()
    }
}

pub fn is_weakly_acyclic(positives: &[PositiveConstraint]) -> WeakAcyclicity {
    let graph = DependencyGraph::build(positives);
    let cycle = graph.find_special_cycle();
    WeakAcyclicity { graph, cycle }
}

pub fn check_weak_acyclicity(positives: &[PositiveConstraint]) -> Result<(), ModelError> {
    match is_weakly_acyclic(positives).cycle {
        None => Ok(()),
        Some(c) => Err(ModelError::NotWeaklyAcyclic(c)),
    }
}
