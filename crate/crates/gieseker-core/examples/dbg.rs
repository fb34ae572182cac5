use gieseker_core::chainbundle::*;
use gieseker_core::exactlin::*;

fn main() {
    let cb = ChainBundle::new(2, vec![1, 1], vec![Matrix::identity(2)]).unwrap();
    let vs = cb.v_subspaces().unwrap();
    for (i, v) in vs.iter().enumerate() {
        println!("V_{}: dim {} basis\n{}", i, v.dim(), v.basis());
    }
    let fnext = preimage(&Matrix::identity(2), &f_part(2, 1)).unwrap();
    println!("F_2[x_1]: dim {} basis\n{}", fnext.dim(), fnext.basis());
    let cap = intersect(&vs[1], &fnext).unwrap();
    println!("cap dim {}", cap.dim());
    println!("def {:?}", cb.is_admissible_by(AdmissibilityMethod::Definition));
    println!("dim {:?}", cb.is_admissible_by(AdmissibilityMethod::Dimension));
    println!("van {:?}", cb.is_admissible_by(AdmissibilityMethod::Vanishing));
    println!("sections -x0: {}", cb.section_space(true, false).unwrap().dim());
}
