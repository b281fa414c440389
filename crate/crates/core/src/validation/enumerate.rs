use crate::syntax::Prop;

/// Every formula over `atoms` and `⊥` with at most `max_connectives`
/// connectives, in order of connective count. `modal` adds `◇` and `□`.
pub fn enumerate_formulas(atoms: &[&str], max_connectives: usize, modal: bool) -> Vec<Prop> {
    let mut levels: Vec<Vec<Prop>> = Vec::with_capacity(max_connectives + 1);
    let mut leaves: Vec<Prop> = atoms.iter().map(|a| Prop::atom(a)).collect();
    leaves.push(Prop::Bot);
    levels.push(leaves);
    for n in 1..=max_connectives {
        let mut lvl = Vec::new();
        if modal {
            for a in &levels[n - 1] {
                lvl.push(Prop::dia(a.clone()));
                lvl.push(Prop::boxed(a.clone()));
            }
        }
        for i in 0..n {
            for a in &levels[i] {
                for b in &levels[n - 1 - i] {
                    lvl.push(Prop::imp(a.clone(), b.clone()));
                }
            }
        }
        levels.push(lvl);
    }
    levels.into_iter().flatten().collect()
}
