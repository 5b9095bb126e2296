//! The invocation that regenerates each figure, as documented in the README.

/// A figure and the command line (without the program name) that writes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FigureCommand {
    pub figure: u32,
    pub caption: &'static str,
    pub args: &'static str,
}

impl FigureCommand {
    pub fn argv(&self) -> Vec<&'static str> {
        self.args.split_whitespace().collect()
    }

    /// The `--out` path, relative to the working directory.
    pub fn output(&self) -> &'static str {
        let argv = self.argv();
        let i = argv
            .iter()
            .position(|a| *a == "--out")
            .expect("every figure writes a file");
        argv[i + 1]
    }
}

pub const FIGURE_COMMANDS: &[FigureCommand] = &[
    FigureCommand {
        figure: 1,
        caption: "curves x^n + y^n = 1 for n = 1..10",
        args: "curve --n 1,2,3,4,5,6,7,8,9,10 --samples 1001 --out figures/fig01_curves.svg",
    },
    FigureCommand {
        figure: 4,
        caption: "line with b/a = 3 folded into the unit square",
        args: "map-line --a 1 --b 3 --samples 2001 --out figures/fig04_flat_b3.svg",
    },
    FigureCommand {
        figure: 5,
        caption: "the folded square rolled into a cylinder",
        args: "map-line --a 1 --b 3 --R 2 --r 1 --surface cylinder --samples 2001 --out figures/fig05_cylinder_b3.obj",
    },
    FigureCommand {
        figure: 6,
        caption: "b/a = 3 line on the torus",
        args: "map-line --a 1 --b 3 --R 2 --r 1 --samples 2001 --out figures/fig06_torus_b3.obj",
    },
    FigureCommand {
        figure: 7,
        caption: "velocity near n = 2",
        args: "kinematics --quantity vel --n 1.9,2,2.1 --x-min 0 --x-max 0.9 --samples 901 --out figures/fig07_velocity_n2.svg",
    },
    FigureCommand {
        figure: 8,
        caption: "acceleration near n = 2",
        args: "kinematics --quantity acc --n 1.9,2,2.1 --x-min 0 --x-max 0.5 --samples 501 --y-min -3 --y-max 0 --out figures/fig08_acceleration_n2.svg",
    },
    FigureCommand {
        figure: 9,
        caption: "b/a = 1 line on the torus",
        args: "map-line --a 1 --b 1 --R 2 --r 1 --samples 2001 --out figures/fig09_torus_b1.obj",
    },
    FigureCommand {
        figure: 10,
        caption: "b/a = 5 line on the torus",
        args: "map-line --a 1 --b 5 --R 2 --r 1 --samples 4001 --out figures/fig10_torus_b5.obj",
    },
    FigureCommand {
        figure: 11,
        caption: "velocity near n = 3",
        args: "kinematics --quantity vel --n 2.9,3,3.1 --x-min 0 --x-max 0.9 --samples 901 --out figures/fig11_velocity_n3.svg",
    },
    FigureCommand {
        figure: 12,
        caption: "acceleration near n = 3",
        args: "kinematics --quantity acc --n 2.9,3,3.1 --x-min 0 --x-max 0.8 --samples 801 --y-min -6 --y-max 0 --out figures/fig12_acceleration_n3.svg",
    },
];
