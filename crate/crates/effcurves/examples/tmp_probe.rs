use effcurves::curves::{normal_intersection, NormalCurve, Side, TriSurface};
use effcurves::projection::{
    four_holed_sphere_in_genus2, project_arc, project_curve, split_into_arcs,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sample(surf: &TriSurface, rng: &mut ChaCha8Rng) -> Option<Vec<u64>> {
    let ne = surf.num_edges();
    let tri_edges: Vec<[usize; 3]> = (0..surf.num_triangles())
        .map(|t| {
            [
                surf.side_edge(Side::new(t, 0)).0,
                surf.side_edge(Side::new(t, 1)).0,
                surf.side_edge(Side::new(t, 2)).0,
            ]
        })
        .collect();
    let mut w = vec![u64::MAX; ne];
    for e in 0..ne {
        let mut choices: Vec<u64> = (0..=4).collect();
        choices.shuffle(rng);
        let ok = choices.into_iter().find(|&v| {
            w[e] = v;
            tri_edges.iter().all(|te| {
                !te.contains(&e)
                    || te.iter().any(|&x| w[x] == u64::MAX)
                    || {
                        let (a, b, c) = (w[te[0]], w[te[1]], w[te[2]]);
                        (a + b + c) % 2 == 0 && a <= b + c && b <= a + c && c <= a + b
                    }
            })
        })?;
        w[e] = ok;
    }
    Some(w)
}

fn main() {
    let emb = four_holed_sphere_in_genus2();
    let budget = 2_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut found = 0;
    for _ in 0..20000 {
        let Some(w) = sample(&emb.ambient, &mut rng) else { continue };
        let Ok(c) = NormalCurve::from_edge_weights(&emb.ambient, &w) else { continue };
        if c.is_empty() || !c.is_connected(&emb.ambient) { continue; }
        let Ok(set) = project_curve(&emb, &c, budget) else { continue };
        let mut bad = None;
        for x in 0..set.curves.len() {
            for y in x + 1..set.curves.len() {
                let i = normal_intersection(&emb.sub, &set.curves[x], &set.curves[y], budget).unwrap();
                if i > 2 {
                    bad = Some((x, y, i));
                }
            }
        }
        if let Some((x, y, i)) = bad {
            println!("source weights {w:?}");
            println!("set has {} curves, pair ({x},{y}) intersects {i}", set.curves.len());
            let arcsys = split_into_arcs(&emb, &c, budget).unwrap();
            println!("{} arcs, contained: {}", arcsys.arcs.len(), arcsys.contained.is_some());
            for (k, arc) in arcsys.arcs.iter().enumerate() {
                let outs = project_arc(&emb, arc).unwrap();
                println!(
                    "arc {k}: comps ({},{}), edges {:?}, {} essential outputs",
                    arc.start_comp, arc.end_comp, arc.edges, outs.len()
                );
                for (j, o) in outs.iter().enumerate() {
                    let same_x = o == &set.curves[x];
                    let same_y = o == &set.curves[y];
                    println!("  out {j}: matches x={same_x} y={same_y}");
                    for (jj, o2) in outs.iter().enumerate().skip(j + 1) {
                        let i2 = normal_intersection(&emb.sub, o, o2, budget).unwrap();
                        println!("  i(out {j}, out {jj}) = {i2}");
                    }
                }
            }
            found += 1;
            if found >= 2 { break; }
        }
    }
}
