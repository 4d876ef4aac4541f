use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use anyhow::Result;

use monobound::certify::{check_proof, ProofTree};
use monobound::classes::NAMED_CLASSES;
use monobound::orientation::{canonical_form, class_members, CanonicalForm, HamiltonOrder};
use monobound::polytope::{dual_graph, symmetry_group, Params, SymmetryGroup};
use monobound::realize::{longest_monotone_path, verify_realization, Realization};

use crate::{read_orders, Status};

#[derive(Default)]
struct Evidence {
    /// Canonical class -> file of a verified realization inducing it.
    realized: BTreeMap<CanonicalForm, String>,
    /// Canonical class -> file of a valid proof for it.
    certified: BTreeMap<CanonicalForm, String>,
    /// Longest monotone path over verified realizations, with its file.
    longest: Option<(usize, String)>,
}

pub fn cmd_report(dir: &Path) -> Result<Status> {
    let mut evidence: BTreeMap<usize, Evidence> = BTreeMap::new();
    let mut groups: BTreeMap<usize, SymmetryGroup> = BTreeMap::new();
    let mut group_for = |d: usize| -> Result<SymmetryGroup> {
        if let Some(g) = groups.get(&d) {
            return Ok(g.clone());
        }
        let g = symmetry_group(Params::corank3(d)?)?;
        groups.insert(d, g.clone());
        Ok(g)
    };

    let mut files: Vec<_> = match std::fs::read_dir(dir) {
        Ok(entries) => entries.filter_map(|e| e.ok().map(|e| e.path())).collect(),
        Err(_) => Vec::new(),
    };
    files.sort();
    println!("fixtures in {}:", dir.display());
    for path in &files {
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default().to_string();
        if name.ends_with(".realization.json") {
            let status = match std::fs::read_to_string(path).map_err(anyhow::Error::from).and_then(|t| {
                serde_json::from_str::<Realization>(&t).map_err(anyhow::Error::from)
            }) {
                Err(e) => format!("UNREADABLE ({e})"),
                Ok(r) => match verify_realization(&r) {
                    Err(e) => format!("INVALID ({e})"),
                    Ok(()) => {
                        let (len, _) = longest_monotone_path(&r)?;
                        let class = canonical_form(&HamiltonOrder(r.order.clone()), &group_for(r.d)?)?;
                        let ev = evidence.entry(r.d).or_default();
                        ev.realized.entry(class).or_insert_with(|| name.clone());
                        if ev.longest.as_ref().is_none_or(|(l, _)| len > *l) {
                            ev.longest = Some((len, name.clone()));
                        }
                        format!("verified realization, d={}, longest monotone path {len}", r.d)
                    }
                },
            };
            println!("  {name}: {status}");
        } else if name.ends_with(".proof") {
            let status = match std::fs::read_to_string(path).map_err(anyhow::Error::from).and_then(|t| {
                ProofTree::from_json(&t).map_err(anyhow::Error::from)
            }) {
                Err(e) => format!("UNREADABLE ({e})"),
                Ok(tree) => match check_proof(&tree) {
                    Err(e) => format!("INVALID ({e})"),
                    Ok(()) => {
                        let class = canonical_form(&tree.order, &group_for(tree.d)?)?;
                        evidence.entry(tree.d).or_default().certified.entry(class).or_insert_with(|| name.clone());
                        format!("valid proof, d={}", tree.d)
                    }
                },
            };
            println!("  {name}: {status}");
        }
    }

    let mut complete = true;
    let mut rows = Vec::new();
    for d in [4usize, 5, 6] {
        let params = Params::corank3(d)?;
        let vertices = dual_graph(params)?.len();
        let group = group_for(d)?;
        let names: BTreeMap<CanonicalForm, &str> = NAMED_CLASSES
            .iter()
            .filter(|c| c.d == d)
            .filter_map(|c| Some((canonical_form(&c.order().ok()?, &group).ok()?, c.name)))
            .collect();
        let ev = evidence.remove(&d).unwrap_or_default();
        let file = dir.join(format!("classes_d{d}.txt"));
        let classes: Option<Vec<CanonicalForm>> = std::fs::read_to_string(&file)
            .ok()
            .and_then(|t| read_orders(&t, false).ok())
            .map(|orders| orders.iter().filter_map(|o| canonical_form(o, &group).ok()).collect::<BTreeSet<_>>())
            .map(|set| set.into_iter().collect());
        let lower = ev.longest.as_ref().map(|(l, _)| *l);
        let Some(classes) = classes else {
            complete = false;
            let lower = lower.map_or("UNVERIFIED".to_string(), |l| l.to_string());
            rows.push(format!("d={d}: classes=UNVERIFIED, bound: {lower} ≤ M({d},{}) ≤ {vertices}", d + 3));
            continue;
        };
        println!("d={d} classes:");
        let (mut realized, mut certified) = (0, 0);
        for c in &classes {
            let name = names.get(c).map_or(String::new(), |n| format!("{n} "));
            let status = match (ev.realized.get(c), ev.certified.get(c)) {
                (Some(r), Some(p)) => {
                    complete = false;
                    format!("CONFLICT: realized by {r} and certified by {p}")
                }
                (Some(r), None) => {
                    realized += 1;
                    format!("realized ({r})")
                }
                (None, Some(p)) => {
                    certified += 1;
                    format!("not realizable ({p})")
                }
                (None, None) => "UNVERIFIED".to_string(),
            };
            if classes.len() <= 20 {
                println!("  {name}{}: {status}", c.order().to_text(d == 6));
            }
        }
        let unresolved = classes.len() - realized - certified;
        let directed: usize = classes.iter().map(|c| class_members(c.order(), &group).len()).sum();
        let upper = if realized > 0 {
            vertices
        } else if unresolved == 0 {
            vertices - 1
        } else {
            vertices
        };
        let lower_text = match (realized > 0, lower) {
            (true, _) => vertices.to_string(),
            (false, Some(l)) => l.to_string(),
            (false, None) => "UNVERIFIED".to_string(),
        };
        let settled = realized > 0 || unresolved == 0;
        if !settled || lower_text == "UNVERIFIED" {
            complete = false;
        }
        let upper_text = if settled { upper.to_string() } else { format!("{upper} (UNVERIFIED)") };
        rows.push(format!(
            "d={d}: classes={} ({} orders up to reversal), realizable={realized}, certified non-realizable={certified}, \
             bound: {lower_text} ≤ M({d},{}) ≤ {upper_text}",
            classes.len(),
            directed / 2,
            d + 3,
        ));
    }
    println!();
    for row in rows {
        println!("{row}");
    }
    Ok(if complete { Status::Ok } else { Status::NotFound })
}
