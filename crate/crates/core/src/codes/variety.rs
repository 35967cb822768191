use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Result;
use crate::gf::{FieldElement, FieldSpec};
use crate::FieldPoly;

/// A point of affine space over the field.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Point(pub Vec<FieldElement>);

impl Point {
    pub fn coords(&self) -> &[FieldElement] {
        &self.0
    }
}

/// Common zeros of an ideal, sorted lexicographically by coordinate encodings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Variety {
    points: Vec<Point>,
}

impl Variety {
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Scans all `q^arity` points and keeps the common zeros of `gens`.
pub fn enumerate_variety(field: &FieldSpec, gens: &[FieldPoly], arity: usize) -> Result<Variety> {
    let q = field.q() as usize;
    let total = q.pow(arity as u32);
    let mut points = Vec::new();
    for idx in 0..total {
        // First coordinate most significant, so points come out sorted.
        let mut coords = vec![FieldElement::ZERO; arity];
        let mut r = idx;
        for c in coords.iter_mut().rev() {
            *c = field.elem((r % q) as u32)?;
            r /= q;
        }
        let mut zero = true;
        for g in gens {
            if !g.eval(field, &coords)?.is_zero() {
                zero = false;
                break;
            }
        }
        if zero {
            points.push(Point(coords));
        }
    }
    Ok(Variety { points })
}

/// Checks that the points off `x = 0` form the Fano plane: each nonzero
/// `x` is a line whose points are its three `y` values.
pub fn verify_fano(field: &FieldSpec, v: &Variety) -> bool {
    if v.points.iter().any(|p| p.0.len() != 2) {
        return false;
    }
    if v.points.iter().filter(|p| p.0[0].is_zero()).count() != 1 {
        return false;
    }
    let lines: Vec<BTreeSet<FieldElement>> = field
        .nonzero_elements()
        .map(|a| v.points.iter().filter(|p| p.0[0] == a).map(|p| p.0[1]).collect())
        .collect();
    if lines.iter().any(|l| l.len() != 3 || l.contains(&FieldElement::ZERO)) {
        return false;
    }
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            if a.intersection(b).count() != 1 {
                return false;
            }
        }
    }
    field
        .nonzero_elements()
        .all(|b| lines.iter().filter(|l| l.contains(&b)).count() == 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::text::parse;

    fn p(s: &str) -> FieldPoly {
        parse(&FieldSpec::gf8(), s, 2).unwrap()
    }

    #[test]
    fn klein_variety() {
        let f = FieldSpec::gf8();
        let v = enumerate_variety(&f, &[p("Y^3 + X^3*Y + X"), p("X^8 + X"), p("Y^8 + Y")], 2).unwrap();
        assert_eq!(v.len(), 22);
        assert_eq!(v.points()[0], Point(vec![FieldElement::ZERO, FieldElement::ZERO]));
        assert!(v.points().windows(2).all(|w| w[0] < w[1]));
        assert!(verify_fano(&f, &v));
        assert_eq!(v.points().iter().filter(|p| !p.0[0].is_zero()).count(), 21);
    }

    #[test]
    fn degenerate_varieties() {
        let f = FieldSpec::gf8();
        let origin = enumerate_variety(&f, &[p("X"), p("Y")], 2).unwrap();
        assert_eq!(origin.points(), &[Point(vec![FieldElement::ZERO; 2])]);
        assert!(!verify_fano(&f, &origin));
        assert!(enumerate_variety(&f, &[p("1")], 2).unwrap().is_empty());
    }
}
