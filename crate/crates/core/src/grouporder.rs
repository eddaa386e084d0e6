//! Left-invariant group orders from order-preserving actions.
//!
//! An effective, order-preserving action on a linearly ordered carrier
//! induces a left order by the first-difference rule: `g < h` iff
//! `g(b_i) < h(b_i)` at the least basepoint where they differ. Acting
//! elements are evaluation oracles compared extensionally up to a configured
//! depth, so effectivity failures surface as explicit errors instead of
//! silent guesses. A left order of a kernel and a left order of the quotient
//! combine lexicographically along a group extension.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::endorder::{self, EndOrderError};
use crate::model::{EndName, LeafSpace, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupOrderError {
    /// Two distinct labels agree on every tested basepoint.
    NotEffectiveAtDepth { a: String, b: String },
    /// An element fails order preservation on a tested basepoint pair.
    OrderViolation { element: String },
    /// `in_kernel` disagrees with `project` on a tested element.
    InconsistentOracles { element: String },
    /// No unicusp pair exists to supply the kernel's fixed point.
    UnicuspNotFound,
    End(EndOrderError),
}

impl fmt::Display for GroupOrderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupOrderError::NotEffectiveAtDepth { a, b } => {
                write!(f, "NotEffectiveAtDepth: {a} and {b} agree on all tested basepoints")
            }
            GroupOrderError::OrderViolation { element } => {
                write!(f, "OrderViolation: {element} does not preserve the carrier order")
            }
            GroupOrderError::InconsistentOracles { element } => {
                write!(f, "InconsistentOracles: in_kernel and project disagree on {element}")
            }
            GroupOrderError::UnicuspNotFound => {
                write!(f, "NotFound: no positive-end pair with exactly one cusp")
            }
            GroupOrderError::End(e) => write!(f, "{e}"),
        }
    }
}

impl From<EndOrderError> for GroupOrderError {
    fn from(e: EndOrderError) -> Self {
        match e {
            EndOrderError::NotFound => GroupOrderError::UnicuspNotFound,
            other => GroupOrderError::End(other),
        }
    }
}

/// Sign of a group element under a left order. `Zero` means the element is
/// extensionally the identity at the tested depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderSign {
    Negative,
    Zero,
    Positive,
}

/// A linearly ordered set with a countable basepoint enumeration.
pub trait OrderedCarrier {
    type Point: Clone + PartialEq;

    fn compare(&self, a: &Self::Point, b: &Self::Point) -> Ordering;

    /// The `i`-th basepoint, or `None` once the enumeration is exhausted.
    fn basepoint(&self, index: usize) -> Option<Self::Point>;
}

impl<C: OrderedCarrier> OrderedCarrier for &C {
    type Point = C::Point;

    fn compare(&self, a: &Self::Point, b: &Self::Point) -> Ordering {
        (*self).compare(a, b)
    }

    fn basepoint(&self, index: usize) -> Option<Self::Point> {
        (*self).basepoint(index)
    }
}

/// The integers with the usual order and the spiral enumeration
/// 0, 1, -1, 2, -2, ...
#[derive(Clone, Copy, Debug, Default)]
pub struct IntegerCarrier;

impl OrderedCarrier for IntegerCarrier {
    type Point = i64;

    fn compare(&self, a: &i64, b: &i64) -> Ordering {
        a.cmp(b)
    }

    fn basepoint(&self, index: usize) -> Option<i64> {
        let i = index as i64;
        Some(if i == 0 {
            0
        } else if i % 2 == 1 {
            (i + 1) / 2
        } else {
            -(i / 2)
        })
    }
}

/// A finite carrier ordered by its listed point order, which is also the
/// basepoint enumeration.
#[derive(Clone, Debug)]
pub struct FiniteCarrier<P: Clone + PartialEq> {
    points: Vec<P>,
}

impl<P: Clone + PartialEq> FiniteCarrier<P> {
    pub fn new(points: Vec<P>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn rank(&self, p: &P) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }
}

impl<P: Clone + PartialEq> OrderedCarrier for FiniteCarrier<P> {
    type Point = P;

    fn compare(&self, a: &P, b: &P) -> Ordering {
        match (self.rank(a), self.rank(b)) {
            (Some(i), Some(j)) => i.cmp(&j),
            // Unrepresented points are incomparable; callers keep to the
            // carrier. Treat as equal to stay total on represented elements.
            _ => Ordering::Equal,
        }
    }

    fn basepoint(&self, index: usize) -> Option<P> {
        self.points.get(index).cloned()
    }
}

/// An order-preserving bijection of the carrier, given by an evaluation
/// oracle. Equality between elements is decided extensionally on basepoints.
pub struct ActingElement<'a, P> {
    pub name: String,
    eval: Box<dyn Fn(&P) -> P + 'a>,
}

impl<'a, P> ActingElement<'a, P> {
    pub fn new(name: impl Into<String>, eval: impl Fn(&P) -> P + 'a) -> Self {
        Self {
            name: name.into(),
            eval: Box::new(eval),
        }
    }

    pub fn apply(&self, p: &P) -> P {
        (self.eval)(p)
    }
}

impl<'a, P> fmt::Debug for ActingElement<'a, P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ActingElement({})", self.name)
    }
}

/// The first-difference order induced by an action on an ordered carrier.
pub struct ActionOrder<C: OrderedCarrier> {
    carrier: C,
    base: Vec<C::Point>,
}

impl<C: OrderedCarrier> ActionOrder<C> {
    pub fn basepoints(&self) -> &[C::Point] {
        &self.base
    }

    /// First-difference comparison. Distinct labels that agree on every
    /// basepoint are an effectivity failure, not an equality.
    pub fn compare(
        &self,
        g: &ActingElement<'_, C::Point>,
        h: &ActingElement<'_, C::Point>,
    ) -> Result<Ordering, GroupOrderError> {
        for b in &self.base {
            let gb = g.apply(b);
            let hb = h.apply(b);
            match self.carrier.compare(&gb, &hb) {
                Ordering::Equal => continue,
                other => return Ok(other),
            }
        }
        if g.name == h.name {
            Ok(Ordering::Equal)
        } else {
            Err(GroupOrderError::NotEffectiveAtDepth {
                a: g.name.clone(),
                b: h.name.clone(),
            })
        }
    }

    /// Sign against the identity: positive iff the element moves the first
    /// basepoint it moves upward.
    pub fn sign_of(&self, g: &ActingElement<'_, C::Point>) -> OrderSign {
        for b in &self.base {
            let gb = g.apply(b);
            match self.carrier.compare(&gb, b) {
                Ordering::Equal => continue,
                Ordering::Less => return OrderSign::Negative,
                Ordering::Greater => return OrderSign::Positive,
            }
        }
        OrderSign::Zero
    }

    pub fn is_positive(&self, g: &ActingElement<'_, C::Point>) -> bool {
        self.sign_of(g) == OrderSign::Positive
    }
}

/// Build the first-difference left order of a family acting on a carrier.
///
/// Checks, up to `depth` basepoints, that every element preserves the
/// carrier order and that distinct elements act differently.
pub fn order_from_action<C: OrderedCarrier>(
    carrier: C,
    elements: &[ActingElement<'_, C::Point>],
    depth: usize,
) -> Result<ActionOrder<C>, GroupOrderError> {
    let mut base = Vec::new();
    for i in 0..depth {
        match carrier.basepoint(i) {
            Some(p) => base.push(p),
            None => break,
        }
    }
    for g in elements {
        for i in 0..base.len() {
            for j in (i + 1)..base.len() {
                let want = carrier.compare(&base[i], &base[j]);
                let got = carrier.compare(&g.apply(&base[i]), &g.apply(&base[j]));
                if want != got {
                    return Err(GroupOrderError::OrderViolation {
                        element: g.name.clone(),
                    });
                }
            }
        }
    }
    let order = ActionOrder { carrier, base };
    for i in 0..elements.len() {
        for j in (i + 1)..elements.len() {
            order.compare(&elements[i], &elements[j])?;
        }
    }
    Ok(order)
}

/// A left-invariant order given by its positivity predicate.
pub struct LeftOrder<'a, G> {
    sign: Box<dyn Fn(&G) -> Result<OrderSign, GroupOrderError> + 'a>,
}

impl<'a, G> LeftOrder<'a, G> {
    pub fn new(sign: impl Fn(&G) -> Result<OrderSign, GroupOrderError> + 'a) -> Self {
        Self {
            sign: Box::new(sign),
        }
    }

    pub fn sign_of(&self, g: &G) -> Result<OrderSign, GroupOrderError> {
        (self.sign)(g)
    }

    pub fn is_positive(&self, g: &G) -> Result<bool, GroupOrderError> {
        Ok(self.sign_of(g)? == OrderSign::Positive)
    }
}

/// Extend a left order of a kernel by a left order of the quotient: an
/// element is positive iff its projection is positive, or it lies in the
/// kernel and is kernel-positive.
pub fn extend_order<'a, G: 'a, Q: 'a>(
    h_order: LeftOrder<'a, G>,
    q_order: LeftOrder<'a, Q>,
    project: impl Fn(&G) -> Q + 'a,
    in_kernel: impl Fn(&G) -> bool + 'a,
    describe: impl Fn(&G) -> String + 'a,
) -> LeftOrder<'a, G> {
    LeftOrder::new(move |g: &G| {
        let q = project(g);
        let qs = q_order.sign_of(&q)?;
        if in_kernel(g) {
            if qs != OrderSign::Zero {
                return Err(GroupOrderError::InconsistentOracles {
                    element: describe(g),
                });
            }
            h_order.sign_of(g)
        } else {
            if qs == OrderSign::Zero {
                return Err(GroupOrderError::InconsistentOracles {
                    element: describe(g),
                });
            }
            Ok(qs)
        }
    })
}

/// Outcome of the end-action assembly.
pub enum Section33Outcome {
    /// The family acts effectively on the ordered positive ends; the induced
    /// first-difference order is returned.
    Order(ActionOrder<FiniteCarrier<EndName>>),
    /// Several supplied elements fix every positive end: an order of that
    /// kernel must be supplied externally and extended via [`extend_order`].
    /// The two members of the unicusp pair's jump are the candidate fixed
    /// points for the kernel's stabilized point.
    Degenerate(DegenerateAction),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerateAction {
    /// Names of the supplied elements fixing every positive end.
    pub kernel: Vec<String>,
    /// The unicusp pair whose broken curve has exactly one cusp.
    pub pair: (EndName, EndName),
    /// Both member points of that cusp; either may serve as the stabilized
    /// point.
    pub lambda_candidates: (VertexId, VertexId),
}

/// Assemble the order of a family acting on the positive ends of a model:
/// either the induced order (kernel trivial) or the degenerate report naming
/// the unicusp-pair fixed-point candidates.
pub fn assemble_section_3_3(
    ls: &LeafSpace,
    autos: &[ActingElement<'_, EndName>],
) -> Result<Section33Outcome, GroupOrderError> {
    let ordered = endorder::end_order(ls)?;
    let points: Vec<EndName> = ordered.into_iter().map(|e| e.name).collect();
    let kernel: Vec<&ActingElement<'_, EndName>> = autos
        .iter()
        .filter(|g| points.iter().all(|p| &g.apply(p) == p))
        .collect();
    if kernel.len() > 1 {
        let (x1, x2, cusp) = endorder::find_unicusp_pair(ls)?;
        return Ok(Section33Outcome::Degenerate(DegenerateAction {
            kernel: kernel.iter().map(|g| g.name.clone()).collect(),
            pair: (x1.name, x2.name),
            lambda_candidates: (cusp.from, cusp.to),
        }));
    }
    let depth = points.len();
    let carrier = FiniteCarrier::new(points);
    let order = order_from_action(carrier, autos, depth)?;
    Ok(Section33Outcome::Order(order))
}

impl fmt::Display for OrderSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderSign::Negative => write!(f, "negative"),
            OrderSign::Zero => write!(f, "zero"),
            OrderSign::Positive => write!(f, "positive"),
        }
    }
}
