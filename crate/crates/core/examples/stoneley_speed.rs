//! Stoneley root search across a density contrast; equal shear speeds keep
//! the root close to c_s.

use surfwave::dispersion::stoneley_speed;
use surfwave::synthesis::stoneley_zeta;
use surfwave::{Bimaterial, MaterialPoint};

fn main() -> surfwave::Result<()> {
    let soft = MaterialPoint::new(1.0, 1.0, 1.0)?;
    for k in [1.0, 1.5, 2.0, 4.0, 8.0] {
        let pair = Bimaterial::new(MaterialPoint::new(k, k, k)?, soft)?;
        let root = stoneley_speed(&pair)?;
        match root.c_st {
            Some(c) => {
                let z = stoneley_zeta(&pair, c);
                println!("contrast {k:>4}: c_ST = {c:.8}  m1' = {:.3e}  zeta = ({:.4}, {:.4})", root.slope.unwrap(), z.zeta1, z.zeta2);
            }
            None => println!("contrast {k:>4}: no Stoneley wave"),
        }
    }
    Ok(())
}
