//! Bundled best-known solution costs for common CVRPLIB benchmark
//! instances (X, CMT and Golden sets). Looked up by instance name when no
//! explicit value is supplied; gap columns are omitted for unknown names.

const BKS: [(&str, f64); 119] = [
    ("CMT1", 524.61),
    ("CMT2", 835.26),
    ("CMT3", 826.14),
    ("CMT4", 1028.42),
    ("CMT5", 1291.29),
    ("CMT11", 1042.12),
    ("CMT12", 819.56),
    ("X-n101-k25", 27591.0),
    ("X-n106-k14", 26362.0),
    ("X-n110-k13", 14971.0),
    ("X-n115-k10", 12747.0),
    ("X-n120-k6", 13332.0),
    ("X-n125-k30", 55539.0),
    ("X-n129-k18", 28940.0),
    ("X-n134-k13", 10916.0),
    ("X-n139-k10", 13590.0),
    ("X-n143-k7", 15700.0),
    ("X-n148-k46", 43448.0),
    ("X-n153-k22", 21220.0),
    ("X-n157-k13", 16876.0),
    ("X-n162-k11", 14138.0),
    ("X-n167-k10", 20557.0),
    ("X-n172-k51", 45607.0),
    ("X-n176-k26", 47812.0),
    ("X-n181-k23", 25569.0),
    ("X-n186-k15", 24145.0),
    ("X-n190-k8", 16980.0),
    ("X-n195-k51", 44225.0),
    ("X-n200-k36", 58578.0),
    ("X-n204-k19", 19565.0),
    ("X-n209-k16", 30656.0),
    ("X-n214-k11", 10856.0),
    ("X-n219-k73", 117595.0),
    ("X-n223-k34", 40437.0),
    ("X-n228-k23", 25742.0),
    ("X-n233-k16", 19230.0),
    ("X-n237-k14", 27042.0),
    ("X-n242-k48", 82751.0),
    ("X-n247-k50", 37274.0),
    ("X-n251-k28", 38684.0),
    ("X-n256-k16", 18839.0),
    ("X-n261-k13", 26558.0),
    ("X-n266-k58", 75478.0),
    ("X-n270-k35", 35291.0),
    ("X-n275-k28", 21245.0),
    ("X-n280-k17", 33503.0),
    ("X-n284-k15", 20215.0),
    ("X-n289-k60", 95151.0),
    ("X-n294-k50", 47161.0),
    ("X-n298-k31", 34231.0),
    ("X-n303-k21", 21736.0),
    ("X-n308-k13", 25859.0),
    ("X-n313-k71", 94043.0),
    ("X-n317-k53", 78355.0),
    ("X-n322-k28", 29834.0),
    ("X-n327-k20", 27532.0),
    ("X-n331-k15", 31102.0),
    ("X-n336-k84", 139111.0),
    ("X-n344-k43", 42050.0),
    ("X-n351-k40", 25896.0),
    ("X-n359-k29", 51505.0),
    ("X-n367-k17", 22814.0),
    ("X-n376-k94", 147713.0),
    ("X-n384-k52", 65938.0),
    ("X-n393-k38", 38260.0),
    ("X-n401-k29", 66163.0),
    ("X-n411-k19", 19712.0),
    ("X-n420-k130", 107798.0),
    ("X-n429-k61", 65449.0),
    ("X-n439-k37", 36391.0),
    ("X-n449-k29", 55233.0),
    ("X-n459-k26", 24139.0),
    ("X-n469-k138", 221824.0),
    ("X-n480-k70", 89449.0),
    ("X-n491-k59", 66483.0),
    ("X-n502-k39", 69226.0),
    ("X-n513-k21", 24201.0),
    ("X-n524-k153", 154593.0),
    ("X-n536-k96", 94846.0),
    ("X-n548-k50", 86700.0),
    ("X-n561-k42", 42717.0),
    ("X-n573-k30", 50673.0),
    ("X-n586-k159", 190316.0),
    ("X-n599-k92", 108451.0),
    ("X-n613-k62", 59535.0),
    ("X-n627-k43", 62164.0),
    ("X-n641-k35", 63692.0),
    ("X-n655-k131", 106780.0),
    ("X-n670-k130", 146332.0),
    ("X-n685-k75", 68205.0),
    ("X-n701-k44", 81923.0),
    ("X-n716-k35", 43379.0),
    ("X-n733-k159", 136187.0),
    ("X-n749-k98", 77269.0),
    ("X-n766-k71", 114418.0),
    ("X-n783-k48", 72393.0),
    ("X-n801-k40", 73305.0),
    ("X-n819-k171", 158121.0),
    ("X-n837-k142", 193737.0),
    ("X-n856-k95", 88965.0),
    ("X-n876-k59", 99299.0),
    ("X-n895-k37", 53860.0),
    ("X-n916-k207", 329179.0),
    ("X-n936-k151", 132715.0),
    ("X-n957-k87", 85465.0),
    ("X-n979-k58", 118976.0),
    ("X-n1001-k43", 72355.0),
    ("Golden9", 579.71),
    ("Golden10", 735.43),
    ("Golden11", 911.98),
    ("Golden12", 1101.5),
    ("Golden13", 857.19),
    ("Golden14", 1080.55),
    ("Golden15", 1337.27),
    ("Golden16", 1611.28),
    ("Golden17", 707.76),
    ("Golden18", 995.13),
    ("Golden19", 1365.6),
    ("Golden20", 1817.59),
];

/// Best-known cost on record for the given instance name.
pub fn lookup(name: &str) -> Option<f64> {
    BKS.iter()
        .find(|(entry, _)| *entry == name)
        .map(|&(_, cost)| cost)
}
