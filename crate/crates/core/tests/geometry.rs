use mixforge::geometry::{
    link_cycle_degree, render_svg, self_intersections, simplify_loop, to_path, winding_number,
    Annotations, DegreeClass, Half, ReductionCase, SimplifyOutcome, Vec2,
};
use mixforge::words::{enumerate_on, Word};

fn w(s: &str) -> Word {
    Word::parse(s, 2).unwrap()
}

fn steps(word: &Word) -> Vec<Vec2> {
    let p = to_path(word);
    (0..p.len())
        .map(|t| {
            let d = p.step(t);
            [d[0] as i64, d[1] as i64]
        })
        .collect()
}

#[test]
fn embedded_loops_turn_once() {
    let mut seen = 0;
    for m in (4..=10).step_by(2) {
        for word in enumerate_on(m, 2, 10_000_000).unwrap() {
            if to_path(&word).is_embedded() {
                let r = winding_number(&steps(&word), true).unwrap();
                assert!(r == 1 || r == -1, "{word}: {r}");
                seen += 1;
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn positive_degree_loop() {
    let first = w("abbAAABBBBaaaaa");
    let second = w("abbbbbAABBBBAAb");
    let path = to_path(&first.concat(&second));
    assert!(path.is_embedded());
    let r = link_cycle_degree(&path, Half::First, 1).unwrap();
    assert!(r.degree > 0);
    assert_eq!(r.case_class, DegreeClass::Positive);
    for k in 1..4 {
        let turned = link_cycle_degree(&path.rotated(k).unwrap(), Half::First, 1).unwrap();
        assert_eq!(turned.degree, r.degree);
    }
}

#[test]
fn doubled_square_self_intersection() {
    let hits = self_intersections(&to_path(&w("aAaA"))).unwrap();
    assert!(hits
        .iter()
        .any(|h| (h.t1, h.t2, h.case) == (1, 3, ReductionCase::Case5)));
}

#[test]
fn simplification_of_figure_one() {
    let fig = w("abbAbaBaBBBAbA");
    match simplify_loop(&fig.slice(0, 7), &fig.slice(7, 14)) {
        SimplifyOutcome::Split { r, s, .. } => assert!(0 < r && r < 7 && 7 < s && s < 14),
        SimplifyOutcome::Embedded { w1, w2, .. } => {
            assert!(to_path(&w1.concat(&w2)).is_embedded() || w1.len() + w2.len() <= 2)
        }
    }
}

#[test]
fn svg_is_deterministic() {
    let fig = to_path(&w("abbAbaBaBBBAbA"));
    let ann = Annotations::default().marker("p", 0).marker("q", 7);
    assert_eq!(
        render_svg(&fig, &ann).unwrap(),
        render_svg(&fig, &ann).unwrap()
    );
}
