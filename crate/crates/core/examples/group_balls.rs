//! Word-metric balls in the shipped groups.

use coarse_cover::group::{ball, FreeGroup, Group, Heisenberg, IntegerLattice, Lamplighter};

fn sizes<G: Group>(group: G) -> coarse_cover::Result<()> {
    let name = group.name();
    let counts = (0..=4)
        .map(|n| ball(group.clone(), n).map(|w| w.len().to_string()))
        .collect::<coarse_cover::Result<Vec<_>>>()?;
    println!("{name:>8}: |B(N)| for N = 0..4 is {}", counts.join(", "));
    Ok(())
}

fn main() -> coarse_cover::Result<()> {
    sizes(IntegerLattice::new(2))?;
    sizes(FreeGroup::new(2)?)?;
    sizes(Lamplighter)?;
    sizes(Heisenberg)?;

    let h = ball(Heisenberg, 4)?;
    let far: Vec<String> = h
        .elements()
        .iter()
        .filter(|e| h.word_length(e) == Some(4) && e.a == 0 && e.b == 0)
        .map(|e| e.to_string())
        .collect();
    println!("central elements of length 4 in H3(Z): {}", far.join(" "));
    Ok(())
}
