//! Volume-weighted transport distance between two layouts of one template.
//!
//! Objects may only be matched to objects with the same name. Within each
//! name group the cheapest bijection is found exactly; groups are
//! independent, so the distance is the sum of per-group optima.

mod assignment;

pub use assignment::{min_cost_matching, Assignment};

use serde::Serialize;

use crate::interp::Layout;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("layouts do not share a template: {0}")]
pub struct TemplateMismatch(pub String);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CategoryMatching {
    pub name: String,
    /// `(index in l, index in l0)` pairs, ordered by the first index.
    pub pairs: Vec<(usize, usize)>,
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Matching {
    pub categories: Vec<CategoryMatching>,
    pub cost: f64,
}

/// Object indices grouped by name, groups in order of first appearance.
fn categories(l: &Layout) -> Vec<(&str, Vec<usize>)> {
    let mut groups: Vec<(&str, Vec<usize>)> = Vec::new();
    for (i, o) in l.objects.iter().enumerate() {
        match groups.iter_mut().find(|(name, _)| *name == o.name) {
            Some((_, members)) => members.push(i),
            None => groups.push((&o.name, vec![i])),
        }
    }
    groups
}

/// Optimal category-preserving matching from `l` to `l0`.
///
/// Each object is weighted by the volume it has in `l`.
pub fn ot_matching(l: &Layout, l0: &Layout) -> Result<Matching, TemplateMismatch> {
    let ours = categories(l);
    let theirs = categories(l0);
    if ours.len() != theirs.len() {
        return Err(TemplateMismatch(format!(
            "{} object names versus {}",
            ours.len(),
            theirs.len()
        )));
    }
    let mut out = Vec::with_capacity(ours.len());
    let mut total = 0.0;
    for (name, rows) in &ours {
        let cols = theirs
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, members)| members)
            .ok_or_else(|| TemplateMismatch(format!("`{name}` missing from second layout")))?;
        if cols.len() != rows.len() {
            return Err(TemplateMismatch(format!(
                "`{name}` appears {} times versus {}",
                rows.len(),
                cols.len()
            )));
        }
        let cost: Vec<Vec<f64>> = rows
            .iter()
            .map(|&i| {
                let o = &l.objects[i];
                let vol = o.volume();
                cols.iter()
                    .map(|&j| vol * (o.center - l0.objects[j].center).norm())
                    .collect()
            })
            .collect();
        let a = min_cost_matching(&cost);
        total += a.cost;
        out.push(CategoryMatching {
            name: (*name).to_string(),
            pairs: rows
                .iter()
                .zip(&a.columns)
                .map(|(&i, &k)| (i, cols[k]))
                .collect(),
            cost: a.cost,
        });
    }
    Ok(Matching {
        categories: out,
        cost: total,
    })
}

pub fn ot_distance(l: &Layout, l0: &Layout) -> Result<f64, TemplateMismatch> {
    ot_matching(l, l0).map(|m| m.cost)
}
