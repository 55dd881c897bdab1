use hardytree::geometry::*;
use hardytree::scenario::Scenario;

fn main() {
    for name in ["square-point", "square-face", "square-cantor"] {
        let s = Scenario::by_name(name).unwrap();
        let pipe = s.build().unwrap();
        let dt = &pipe.dt;
        let root = dt.tree.root();
        let numax = dt.tree.vertices().filter(|&v| dt.in_w_hat[v]).map(|v| dt.k[v]).max().unwrap();
        let nu0 = dt.k[root];
        print!("{name}: nu0={nu0} raw counts:");
        for nu in nu0..=numax {
            let c = dt.tree.vertices().filter(|&v| dt.in_w_hat[v] && dt.k[v] == nu).count();
            print!(" {nu}:{c}");
        }
        println!();
        let rep = counting_checks(&pipe.dt, &pipe.quo);
        println!("  windowed(k={}): {:?}", rep.k_hat, rep.windowed);
        println!("  lemma4: {:?}", rep.lemma4);
        println!("  s_bar={} m={}", pipe.part.s_bar, pipe.quo.m);
    }
}
