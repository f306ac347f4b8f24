use niemeier_theta::lattice::{build, coxeter_number, Label};
use niemeier_theta::shortvec::enumerate_short;
use niemeier_theta::Int;

#[test]
fn all_niemeier_lattices_are_even_unimodular_with_expected_roots() {
    for label in Label::NIEMEIER {
        let lat = build(&label).unwrap();
        assert_eq!(lat.rank(), 24);
        assert_eq!(lat.gram.det(), Int::from(1), "{label}");
        let h = coxeter_number(&label).unwrap() as usize;
        assert_eq!(enumerate_short(&lat, 2).unwrap().count(2), 24 * h, "{label}");
    }
}

#[test]
fn leech_minimal_vectors() {
    let t = std::time::Instant::now();
    let lat = build(&Label::Omega).unwrap();
    let v = enumerate_short(&lat, 4).unwrap();
    assert_eq!(v.count(2), 0);
    assert_eq!(v.count(4), 196560);
    eprintln!("leech norm 4 in {:?}", t.elapsed());
}
