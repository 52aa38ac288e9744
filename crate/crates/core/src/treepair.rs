//! Reduced tree-pair diagrams.
//!
//! A finite binary tree is the same thing as a partition of `[0, 1]` into
//! standard dyadic cells `[j/2^d, (j+1)/2^d]`: a leaf reached by the path
//! `p` (left = 0, right = 1) covers the cell whose binary expansion starts
//! with `p`. Trees are stored as their leaf partitions; [`BinTree`] is the
//! textual/structural view.
//!
//! A pair `(dom, ran)` sends the `i`-th leaf cell of `dom` linearly onto the
//! `i`-th leaf cell of `ran`. With this orientation the pair
//! `((*,*),*) -> (*,(*,*))` is exactly `x₀`: it sends `[0,1/4]` onto
//! `[0,1/2]`, `[1/4,1/2]` onto `[1/2,3/4]` and `[1/2,1]` onto `[3/4,1]`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::plmap::{Breakpoint, Interval, PLMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("trees have different leaf counts ({0} vs {1})")]
    LeafCountMismatch(usize, usize),
    #[error("tree-pair diagrams represent maps on [0, 1] only")]
    NotUnitDomain,
    #[error("leaf index {0} out of range")]
    NoSuchLeaf(usize),
    #[error("cannot parse tree: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BinTree {
    Leaf,
    Node(Box<BinTree>, Box<BinTree>),
}

impl BinTree {
    pub fn caret(left: BinTree, right: BinTree) -> Self {
        BinTree::Node(Box::new(left), Box::new(right))
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            BinTree::Leaf => 1,
            BinTree::Node(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    fn cells(&self) -> Vec<Cell> {
        fn walk(t: &BinTree, start: Dyadic, depth: u32, out: &mut Vec<Cell>) {
            match t {
                BinTree::Leaf => out.push(Cell { start, depth }),
                BinTree::Node(l, r) => {
                    let mid = &start + &Dyadic::pow2(-(depth as i64) - 1);
                    walk(l, start, depth + 1, out);
                    walk(r, mid, depth + 1, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, Dyadic::zero(), 0, &mut out);
        out
    }

    // Rebuilds the tree whose leaves are exactly `cells` (a partition of [0,1]).
    fn from_cells(cells: &[Cell]) -> Self {
        fn build(start: &Dyadic, depth: u32, cells: &[Cell]) -> BinTree {
            if cells.len() == 1 {
                debug_assert_eq!(cells[0].depth, depth);
                return BinTree::Leaf;
            }
            let mid = start + &Dyadic::pow2(-(depth as i64) - 1);
            let split = cells.partition_point(|c| c.start < mid);
            BinTree::caret(
                build(start, depth + 1, &cells[..split]),
                build(&mid, depth + 1, &cells[split..]),
            )
        }
        build(&Dyadic::zero(), 0, cells)
    }
}

impl fmt::Display for BinTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BinTree::Leaf => write!(f, "*"),
            BinTree::Node(l, r) => write!(f, "({l},{r})"),
        }
    }
}

impl FromStr for BinTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        fn parse(chars: &[char], pos: &mut usize) -> Result<BinTree, TreeError> {
            match chars.get(*pos) {
                Some('*') => {
                    *pos += 1;
                    Ok(BinTree::Leaf)
                }
                Some('(') => {
                    *pos += 1;
                    let l = parse(chars, pos)?;
                    expect(chars, pos, ',')?;
                    let r = parse(chars, pos)?;
                    expect(chars, pos, ')')?;
                    Ok(BinTree::caret(l, r))
                }
                other => Err(TreeError::Parse(format!(
                    "expected '*' or '(' at {}, found {:?}",
                    *pos, other
                ))),
            }
        }
        fn expect(chars: &[char], pos: &mut usize, c: char) -> Result<(), TreeError> {
            if chars.get(*pos) == Some(&c) {
                *pos += 1;
                Ok(())
            } else {
                Err(TreeError::Parse(format!("expected {c:?} at {}", *pos)))
            }
        }
        let t = parse(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(TreeError::Parse(format!("trailing input at {pos}")));
        }
        Ok(t)
    }
}

/// Standard dyadic cell `[start, start + 2^-depth]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Cell {
    start: Dyadic,
    depth: u32,
}

impl Cell {
    fn end(&self) -> Dyadic {
        &self.start + &Dyadic::pow2(-(self.depth as i64))
    }

    fn children(&self) -> (Cell, Cell) {
        let d = self.depth + 1;
        let mid = &self.start + &Dyadic::pow2(-(d as i64));
        (
            Cell {
                start: self.start.clone(),
                depth: d,
            },
            Cell {
                start: mid,
                depth: d,
            },
        )
    }

    fn is_left_child(&self) -> bool {
        self.depth > 0 && self.start.mul_pow2(self.depth as i64 - 1).exponent() == 0
    }

    fn parent(&self) -> Cell {
        Cell {
            start: self.start.clone(),
            depth: self.depth - 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreePair {
    dom: Vec<Cell>,
    ran: Vec<Cell>,
}

impl TreePair {
    pub fn new(dom: BinTree, ran: BinTree) -> Result<Self, TreeError> {
        let (dom, ran) = (dom.cells(), ran.cells());
        if dom.len() != ran.len() {
            return Err(TreeError::LeafCountMismatch(dom.len(), ran.len()));
        }
        Ok(TreePair { dom, ran })
    }

    pub fn identity() -> Self {
        TreePair {
            dom: BinTree::Leaf.cells(),
            ran: BinTree::Leaf.cells(),
        }
    }

    pub fn x0() -> Self {
        "((*,*),*) -> (*,(*,*))".parse().expect("x0 diagram")
    }

    pub fn x1() -> Self {
        "(*,((*,*),*)) -> (*,(*,(*,*)))"
            .parse()
            .expect("x1 diagram")
    }

    pub fn dom(&self) -> BinTree {
        BinTree::from_cells(&self.dom)
    }

    pub fn ran(&self) -> BinTree {
        BinTree::from_cells(&self.ran)
    }

    pub fn leaf_count(&self) -> usize {
        self.dom.len()
    }

    pub fn to_map(&self) -> PLMap {
        let mut points: Vec<Breakpoint> = self
            .dom
            .iter()
            .zip(&self.ran)
            .map(|(d, r)| Breakpoint::new(d.start.clone(), r.start.clone()))
            .collect();
        points.push(Breakpoint::new(Dyadic::one(), Dyadic::one()));
        PLMap::make(Interval::unit(), points).expect("tree pairs give valid maps")
    }

    /// The reduced diagram of a map on `[0, 1]`.
    pub fn from_map(f: &PLMap) -> Result<Self, TreeError> {
        if f.domain() != &Interval::unit() {
            return Err(TreeError::NotUnitDomain);
        }
        let pts = f.points();
        let mut dom = Vec::new();
        let mut ran = Vec::new();
        let mut stack = vec![Cell {
            start: Dyadic::zero(),
            depth: 0,
        }];
        while let Some(c) = stack.pop() {
            let end = c.end();
            let linear = !pts.iter().any(|p| c.start < p.x && p.x < end);
            if linear {
                let s = f.slope_right(&c.start).expect("cell inside [0,1]");
                let image_depth = c.depth as i64 - s;
                let y = f.evaluate(&c.start).expect("cell inside [0,1]");
                if image_depth >= 0 && y.mul_pow2(image_depth).exponent() == 0 {
                    dom.push(c);
                    ran.push(Cell {
                        start: y,
                        depth: image_depth as u32,
                    });
                    continue;
                }
            }
            let (l, r) = c.children();
            stack.push(r);
            stack.push(l);
        }
        Ok(TreePair { dom, ran }.reduce())
    }

    /// Removes common carets until none remain.
    pub fn reduce(&self) -> TreePair {
        let mut dom: Vec<Cell> = Vec::with_capacity(self.dom.len());
        let mut ran: Vec<Cell> = Vec::with_capacity(self.ran.len());
        for (d, r) in self.dom.iter().zip(&self.ran) {
            dom.push(d.clone());
            ran.push(r.clone());
            while dom.len() >= 2 {
                let n = dom.len();
                let common = dom[n - 2].depth == dom[n - 1].depth
                    && ran[n - 2].depth == ran[n - 1].depth
                    && dom[n - 2].is_left_child()
                    && ran[n - 2].is_left_child();
                if !common {
                    break;
                }
                dom.pop();
                ran.pop();
                let pd = dom.pop().expect("two cells").parent();
                let pr = ran.pop().expect("two cells").parent();
                dom.push(pd);
                ran.push(pr);
            }
        }
        TreePair { dom, ran }
    }

    pub fn is_reduced(&self) -> bool {
        self.reduce().leaf_count() == self.leaf_count()
    }

    /// Adds the same caret under leaf `i` of both trees; the map is unchanged.
    pub fn expand_leaf(&self, i: usize) -> Result<TreePair, TreeError> {
        if i >= self.leaf_count() {
            return Err(TreeError::NoSuchLeaf(i));
        }
        let mut out = self.clone();
        let (dl, dr) = self.dom[i].children();
        let (rl, rr) = self.ran[i].children();
        out.dom.splice(i..=i, [dl, dr]);
        out.ran.splice(i..=i, [rl, rr]);
        Ok(out)
    }

    pub fn inverse(&self) -> TreePair {
        TreePair {
            dom: self.ran.clone(),
            ran: self.dom.clone(),
        }
    }

    /// Right-action product: first `self`, then `other`.
    pub fn multiply(&self, other: &TreePair) -> TreePair {
        let common = refine(&self.ran, &other.dom);
        let dom = transport(&self.ran, &self.dom, &common);
        let ran = transport(&other.dom, &other.ran, &common);
        TreePair { dom, ran }.reduce()
    }

    pub fn pow(&self, n: i64) -> TreePair {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(TreePair::identity(), |acc, _| acc.multiply(&base))
    }
}

// Common refinement of two partitions of [0,1] into standard cells.
fn refine(a: &[Cell], b: &[Cell]) -> Vec<Cell> {
    let mut sa: Vec<Cell> = a.iter().rev().cloned().collect();
    let mut sb: Vec<Cell> = b.iter().rev().cloned().collect();
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    while let (Some(ca), Some(cb)) = (sa.pop(), sb.pop()) {
        debug_assert_eq!(ca.start, cb.start);
        match ca.depth.cmp(&cb.depth) {
            std::cmp::Ordering::Equal => out.push(ca),
            std::cmp::Ordering::Greater => {
                let (l, r) = cb.children();
                sb.push(r);
                sb.push(l);
                sa.push(ca);
            }
            std::cmp::Ordering::Less => {
                let (l, r) = ca.children();
                sa.push(r);
                sa.push(l);
                sb.push(cb);
            }
        }
    }
    out
}

// Carries a refinement of `from` across the leafwise-linear bijection from
// `from` onto `to`.
fn transport(from: &[Cell], to: &[Cell], refined: &[Cell]) -> Vec<Cell> {
    let mut out = Vec::with_capacity(refined.len());
    let mut i = 0;
    for c in refined {
        while from[i].end() <= c.start {
            i += 1;
        }
        let (f, t) = (&from[i], &to[i]);
        let shift = f.depth as i64 - t.depth as i64;
        out.push(Cell {
            start: &t.start + &(&c.start - &f.start).mul_pow2(shift),
            depth: (c.depth as i64 - shift) as u32,
        });
    }
    out
}

impl fmt::Display for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.dom(), self.ran())
    }
}

impl FromStr for TreePair {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (d, r) = s
            .split_once("->")
            .ok_or_else(|| TreeError::Parse("expected 'dom -> ran'".into()))?;
        TreePair::new(d.parse()?, r.parse()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x0_map() -> PLMap {
        "0:0 1/4:1/2 1/2:3/4 1:1".parse().unwrap()
    }

    fn x1_map() -> PLMap {
        "0:0 1/2:1/2 5/8:3/4 3/4:7/8 1:1".parse().unwrap()
    }

    #[test]
    fn tree_text_round_trip() {
        let t: BinTree = "((*,*),(*,(*,*)))".parse().unwrap();
        assert_eq!(t.leaf_count(), 5);
        assert_eq!(t.to_string(), "((*,*),(*,(*,*)))");
        assert_eq!(BinTree::from_cells(&t.cells()), t);
        assert!("((*,*)".parse::<BinTree>().is_err());
        assert!("(*,*)*".parse::<BinTree>().is_err());
        assert!("x".parse::<BinTree>().is_err());
    }

    #[test]
    fn to_map_examples() {
        let id = TreePair::new(BinTree::Leaf, BinTree::Leaf).unwrap();
        assert_eq!(id.to_map(), PLMap::unit_identity());
        assert_eq!(TreePair::x0().to_map(), x0_map());
        assert_eq!(TreePair::x1().to_map(), x1_map());
        let e = TreePair::new(
            "((*,*),*)".parse().unwrap(),
            "((*,*),(*,*))".parse().unwrap(),
        );
        assert_eq!(e, Err(TreeError::LeafCountMismatch(3, 4)));
    }

    #[test]
    fn from_map_examples() {
        let id = TreePair::from_map(&PLMap::unit_identity()).unwrap();
        assert_eq!(id.dom(), BinTree::Leaf);
        assert_eq!(id.ran(), BinTree::Leaf);

        let p = TreePair::from_map(&x0_map()).unwrap();
        assert_eq!(p.leaf_count(), 3);
        assert_eq!(p, TreePair::x0());
        assert_eq!(p.to_map(), x0_map());

        let x2 = x1_map().conjugate(&x0_map()).unwrap();
        let b = &x1_map() * &x2.inverse();
        let pb = TreePair::from_map(&b).unwrap();
        assert!(pb.is_reduced());
        assert_eq!(pb.to_map(), b);

        let half = Interval::new(Dyadic::zero(), "1/2".parse().unwrap()).unwrap();
        assert_eq!(
            TreePair::from_map(&PLMap::identity(half)),
            Err(TreeError::NotUnitDomain)
        );
    }

    #[test]
    fn multiply_examples() {
        let p = TreePair::x1().expand_leaf(2).unwrap();
        assert_eq!(
            p.multiply(&TreePair::from_map(&PLMap::unit_identity()).unwrap()),
            p.reduce()
        );
        let inv = TreePair::from_map(&x0_map().inverse()).unwrap();
        assert_eq!(TreePair::x0().multiply(&inv), TreePair::identity());
        assert_eq!(
            TreePair::x0().multiply(&TreePair::x0()).to_map(),
            &x0_map() * &x0_map()
        );
        assert_eq!(
            TreePair::x0().multiply(&TreePair::x1()).to_map(),
            &x0_map() * &x1_map()
        );
        assert_eq!(
            TreePair::x1().inverse().multiply(&TreePair::x0()).to_map(),
            &x1_map().inverse() * &x0_map()
        );
    }

    #[test]
    fn reduce_examples() {
        let p = TreePair::x1();
        assert!(p.is_reduced());
        assert_eq!(p.reduce(), p);
        for i in 0..p.leaf_count() {
            let e = p.expand_leaf(i).unwrap();
            assert!(!e.is_reduced());
            assert_eq!(e.to_map(), p.to_map());
            assert_eq!(e.reduce(), p);
            let ee = e.expand_leaf(i + 1).unwrap();
            assert_eq!(ee.reduce(), p);
        }
        let f = &x0_map() * &x1_map().inverse();
        let q = TreePair::from_map(&f).unwrap();
        assert_eq!(q.reduce(), q);
        assert!(p.expand_leaf(9).is_err());
    }

    #[test]
    fn pair_text() {
        assert_eq!(TreePair::x0().to_string(), "((*,*),*) -> (*,(*,*))");
        assert!("((*,*),*)".parse::<TreePair>().is_err());
    }
}
