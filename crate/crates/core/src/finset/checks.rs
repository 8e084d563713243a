use std::collections::BTreeSet;

use serde_json::json;

use super::partition::{all_partitions, coarsening_map, coherent_choices_over, CoherentChoice};
use super::set::{all_maps, FinSet, SetMap, SetObj};
use super::ultrafilter::{
    all_ultrafilters, flatten_family, monad, pushforward_family, pushforward_ultrafilter,
};
use crate::diagram::{compute_limit, mediating_morphism, Budget, Cone, Diagram};
use crate::error::{Error, Result};
use crate::report::{Anchor, Report};

/// Largest ground set the partition-based checks accept.
pub const CHECK_BOUND: usize = 5;

fn check_bound(n: usize) -> Result<()> {
    if n > CHECK_BOUND {
        return Err(Error::BoundExceeded {
            what: "ground size",
            value: n,
            bound: CHECK_BOUND,
        });
    }
    Ok(())
}

fn choices_anchor() -> Anchor {
    Anchor::new(
        "ultrafilters as coherent choices",
        "ultrafilters on a finite set correspond bijectively to coherent choices of one block \
         in every partition, via the block containing the generating point",
    )
}

/// Checks that sending each principal ultrafilter to the block containing its
/// point is a bijection onto the coherent choices over all partitions of `n`.
pub fn galvin_horn_check(n: usize) -> Result<Report> {
    check_bound(n)?;
    let parts = all_partitions(n)?;
    let choices = coherent_choices_over(&parts);
    let induced: Vec<CoherentChoice> = all_ultrafilters(SetObj::new(n))
        .iter()
        .map(|u| CoherentChoice::from_point(&parts, u.principal_at()))
        .collect();

    let mut report = Report::new("galvin-horn", choices_anchor())
        .metric("ground_size", n)
        .metric("partitions", parts.len())
        .metric("ultrafilters", induced.len())
        .metric("coherent_choices", choices.len());
    if n == 0 {
        report = report.note(
            "empty ground set: no partitions are enumerated, so both sides are empty by convention",
        );
    }

    for (point, c) in induced.iter().enumerate() {
        if !c.is_coherent(&parts) {
            report.fail(json!({ "ground_size": n, "incoherent_induced_choice_at": point }));
        }
    }
    let distinct: BTreeSet<&CoherentChoice> = induced.iter().collect();
    if distinct.len() != induced.len() {
        report.fail(json!({ "ground_size": n, "reason": "induced choices not injective" }));
    }
    let all: BTreeSet<&CoherentChoice> = choices.iter().collect();
    if let Some(missed) = all.difference(&distinct).next() {
        report.fail(json!({ "ground_size": n, "unreached_choice": missed.choice }));
    }
    if let Some(extra) = distinct.difference(&all).next() {
        report.fail(json!({ "ground_size": n, "choice_not_enumerated": extra.choice }));
    }
    Ok(report)
}

/// The diagram of quotient sets `X/Q` over all partitions `Q` of `n`, with an
/// edge `X/Q1 → X/Q2` whenever `Q2` is strictly coarser than `Q1`, and the
/// cone of quotient maps out of `X`.
pub fn partition_quotient_diagram(n: usize) -> Result<(Diagram<FinSet>, Cone<FinSet>)> {
    let parts = all_partitions(n)?;
    let mut b = Diagram::<FinSet>::builder(());
    for q in &parts {
        b.node(q.to_string(), SetObj::new(q.block_count()));
    }
    for (i, q1) in parts.iter().enumerate() {
        for (j, q2) in parts.iter().enumerate() {
            if i == j {
                continue;
            }
            if let Some(m) = coarsening_map(q1, q2)? {
                b.edge(format!("{q1}->{q2}"), i, j, m);
            }
        }
    }
    let cone = Cone {
        apex: SetObj::new(n),
        legs: parts.iter().map(|q| q.quotient_map()).collect(),
    };
    Ok((b.build()?, cone))
}

/// Checks that `X` is the limit of its partition-quotient diagram, i.e. that
/// the cone of quotient maps is a limit cone.
pub fn partition_limit_check(n: usize) -> Result<Report> {
    check_bound(n)?;
    let anchor = Anchor::new(
        "partition-quotient limit",
        "the limit of the quotients of X by all of its partitions is the set of ultrafilters \
         on X, which for finite X is X itself",
    );
    if n == 0 {
        return Ok(Report::new("partition-limit", anchor)
            .metric("ground_size", 0)
            .skip("empty ground set has no enumerated partitions; the check is degenerate"));
    }
    let (d, cone) = partition_quotient_diagram(n)?;
    let lim = compute_limit(&d, Budget::default())?;
    let mut report = Report::new("partition-limit", anchor)
        .metric("ground_size", n)
        .metric("nodes", d.node_count())
        .metric("edges", d.edge_count())
        .metric("carrier_size", lim.apex.size());
    match mediating_morphism(&d, &lim, &cone) {
        Ok(m) if m.is_bijective() => {}
        Ok(m) => report.fail(json!({ "ground_size": n, "mediating_map": m.table() })),
        Err(e) => report.fail(json!({ "ground_size": n, "error": e.to_string() })),
    }
    Ok(report)
}

/// Exhaustively checks functor, naturality and monad laws of the finite
/// ultrafilter monad on grounds of size at most `max_ground` (≤ 4), including
/// the literal set-family formulas for pushforward and multiplication.
pub fn ultrafilter_monad_check(max_ground: usize) -> Result<Report> {
    if max_ground > 4 {
        return Err(Error::BoundExceeded {
            what: "ultrafilter monad ground size",
            value: max_ground,
            bound: 4,
        });
    }
    let mut report = Report::new(
        "ultrafilter-monad",
        Anchor::new(
            "finite ultrafilter monad",
            "pushforward of ultrafilters is a functor; principal ultrafilters and flattening \
             form a monad",
        ),
    )
    .metric("max_ground", max_ground);

    let sizes: Vec<SetObj> = (0..=max_ground).map(SetObj::new).collect();
    let mut maps_checked = 0usize;
    for &a in &sizes {
        if monad::on_map(&SetMap::identity(a)) != SetMap::identity(a) {
            report.fail(json!({ "law": "identity", "ground": a.size() }));
        }
        for &b in &sizes {
            for f in all_maps(a, b) {
                maps_checked += 1;
                let uf = monad::on_map(&f);
                if uf.after(&monad::unit(a))? != monad::unit(b).after(&f)? {
                    report.fail(json!({ "law": "unit naturality", "map": f.table(), "cod": b.size() }));
                }
                if monad::mult(b).after(&monad::on_map(&uf))? != uf.after(&monad::mult(a))? {
                    report.fail(json!({ "law": "mult naturality", "map": f.table(), "cod": b.size() }));
                }
                for u in all_ultrafilters(a) {
                    let lit = pushforward_family(&f, &u.family()?)?;
                    if lit != pushforward_ultrafilter(&f, &u)?.family()? {
                        report.fail(json!({
                            "law": "pushforward formula",
                            "map": f.table(),
                            "cod": b.size(),
                            "point": u.principal_at()
                        }));
                    }
                }
                for &c in &sizes {
                    for g in all_maps(b, c) {
                        let lhs = monad::on_map(&g.after(&f)?);
                        let rhs = monad::on_map(&g).after(&uf)?;
                        if lhs != rhs {
                            report.fail(json!({
                                "law": "composition",
                                "f": f.table(), "g": g.table(), "cod": c.size()
                            }));
                        }
                    }
                }
            }
        }

        let mu = monad::mult(a);
        let eta_u = monad::unit(a);
        if mu.after(&eta_u)? != SetMap::identity(a) {
            report.fail(json!({ "law": "left unit", "ground": a.size() }));
        }
        if mu.after(&monad::on_map(&monad::unit(a)))? != SetMap::identity(a) {
            report.fail(json!({ "law": "right unit", "ground": a.size() }));
        }
        if mu.after(&monad::on_map(&mu))? != mu.after(&monad::mult(a))? {
            report.fail(json!({ "law": "associativity", "ground": a.size() }));
        }

        // literal flattening of the principal ultrafilter at each inner one
        let inner: Vec<Vec<u32>> = all_ultrafilters(a)
            .iter()
            .map(|u| u.family())
            .collect::<Result<_>>()?;
        for outer in all_ultrafilters(SetObj::new(inner.len())) {
            let flat = flatten_family(a.size(), &inner, &outer.family()?)?;
            let expected = all_ultrafilters(a)[mu.apply(outer.principal_at())].family()?;
            if flat != expected {
                report.fail(json!({
                    "law": "flattening formula",
                    "ground": a.size(),
                    "outer_point": outer.principal_at()
                }));
            }
        }
    }
    report.set_metric("maps_checked", maps_checked);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn galvin_horn_small() {
        for n in 0..=4 {
            let r = galvin_horn_check(n).unwrap();
            assert!(r.is_pass(), "{r}");
            assert_eq!(r.metric_u64("coherent_choices"), Some(n as u64));
            assert_eq!(r.metric_u64("ultrafilters"), Some(n as u64));
        }
        assert!(galvin_horn_check(6).is_err());
    }

    #[test]
    fn partition_limit_small() {
        for n in 1..=4 {
            let r = partition_limit_check(n).unwrap();
            assert!(r.is_pass(), "{r}");
            assert_eq!(r.metric_u64("carrier_size"), Some(n as u64));
        }
        assert!(partition_limit_check(0).unwrap().is_skipped());
    }

    #[test]
    fn quotient_diagram_shape() {
        let (d, _) = partition_quotient_diagram(3).unwrap();
        assert_eq!(d.node_count(), 5);
        // singletons -> 3 two-block partitions and the one-block partition;
        // each two-block partition -> one-block partition
        assert_eq!(d.edge_count(), 7);
    }

    #[test]
    fn monad_laws_small() {
        let r = ultrafilter_monad_check(3).unwrap();
        assert!(r.is_pass(), "{r}");
    }
}
