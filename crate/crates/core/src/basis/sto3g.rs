//! STO-3G contraction data for H, Li, C, N, O, Na and S.
//!
//! Exponents in bohr⁻², contraction coefficients for unnormalized primitives
//! (normalization is applied when basis functions are built). Values follow
//! the standard published STO-3G parameterization.

pub(crate) struct ShellData {
    pub l: u8,
    pub exponents: [f64; 3],
    pub coefficients: [f64; 3],
}

pub(crate) struct ElementData {
    pub symbol: &'static str,
    pub z: u32,
    pub core_electrons: u32,
    pub shells: &'static [ShellData],
}

const C1S: [f64; 3] = [0.154_328_97, 0.535_328_14, 0.444_634_54];
const C2S: [f64; 3] = [-0.099_967_23, 0.399_512_83, 0.700_115_47];
const C2P: [f64; 3] = [0.155_916_27, 0.607_683_72, 0.391_957_39];
const C3S: [f64; 3] = [-0.219_620_37, 0.225_595_43, 0.900_398_43];
const C3P: [f64; 3] = [0.010_587_60, 0.595_167_00, 0.462_001_00];

macro_rules! shell {
    ($l:expr, $e:expr, $c:expr) => {
        ShellData {
            l: $l,
            exponents: $e,
            coefficients: $c,
        }
    };
}

const H_EXP_1S: [f64; 3] = [3.425_250_91, 0.623_913_73, 0.168_855_40];
const LI_EXP_1S: [f64; 3] = [16.119_575_0, 2.936_200_7, 0.794_650_5];
const LI_EXP_2SP: [f64; 3] = [0.636_289_7, 0.147_860_1, 0.048_088_7];
const C_EXP_1S: [f64; 3] = [71.616_837_0, 13.045_096_0, 3.530_512_2];
const C_EXP_2SP: [f64; 3] = [2.941_249_4, 0.683_483_1, 0.222_289_9];
const N_EXP_1S: [f64; 3] = [99.106_169_0, 18.052_312_0, 4.885_660_2];
const N_EXP_2SP: [f64; 3] = [3.780_455_9, 0.878_496_6, 0.285_714_4];
const O_EXP_1S: [f64; 3] = [130.709_320_0, 23.808_861_0, 6.443_608_3];
const O_EXP_2SP: [f64; 3] = [5.033_151_3, 1.169_596_1, 0.380_389_0];
const NA_EXP_1S: [f64; 3] = [250.772_430_0, 45.678_511_0, 12.362_388_0];
const NA_EXP_2SP: [f64; 3] = [12.040_193_0, 2.797_881_9, 0.909_958_0];
const NA_EXP_3SP: [f64; 3] = [1.478_740_6, 0.412_564_9, 0.161_475_1];
const S_EXP_1S: [f64; 3] = [533.125_790_0, 97.109_518_0, 26.281_615_0];
const S_EXP_2SP: [f64; 3] = [33.329_751_0, 7.745_117_5, 2.518_952_5];
const S_EXP_3SP: [f64; 3] = [2.029_194_2, 0.566_140_0, 0.221_583_3];

pub(crate) static ELEMENTS: &[ElementData] = &[
    ElementData {
        symbol: "H",
        z: 1,
        core_electrons: 0,
        shells: &[shell!(0, H_EXP_1S, C1S)],
    },
    ElementData {
        symbol: "Li",
        z: 3,
        core_electrons: 2,
        shells: &[
            shell!(0, LI_EXP_1S, C1S),
            shell!(0, LI_EXP_2SP, C2S),
            shell!(1, LI_EXP_2SP, C2P),
        ],
    },
    ElementData {
        symbol: "C",
        z: 6,
        core_electrons: 2,
        shells: &[
            shell!(0, C_EXP_1S, C1S),
            shell!(0, C_EXP_2SP, C2S),
            shell!(1, C_EXP_2SP, C2P),
        ],
    },
    ElementData {
        symbol: "N",
        z: 7,
        core_electrons: 2,
        shells: &[
            shell!(0, N_EXP_1S, C1S),
            shell!(0, N_EXP_2SP, C2S),
            shell!(1, N_EXP_2SP, C2P),
        ],
    },
    ElementData {
        symbol: "O",
        z: 8,
        core_electrons: 2,
        shells: &[
            shell!(0, O_EXP_1S, C1S),
            shell!(0, O_EXP_2SP, C2S),
            shell!(1, O_EXP_2SP, C2P),
        ],
    },
    ElementData {
        symbol: "Na",
        z: 11,
        core_electrons: 10,
        shells: &[
            shell!(0, NA_EXP_1S, C1S),
            shell!(0, NA_EXP_2SP, C2S),
            shell!(1, NA_EXP_2SP, C2P),
            shell!(0, NA_EXP_3SP, C3S),
            shell!(1, NA_EXP_3SP, C3P),
        ],
    },
    ElementData {
        symbol: "S",
        z: 16,
        core_electrons: 10,
        shells: &[
            shell!(0, S_EXP_1S, C1S),
            shell!(0, S_EXP_2SP, C2S),
            shell!(1, S_EXP_2SP, C2P),
            shell!(0, S_EXP_3SP, C3S),
            shell!(1, S_EXP_3SP, C3P),
        ],
    },
];
