// Generated by tests/oracle/make_reference.py. Do not edit by hand.
// mpmath 30-digit quadrature split at Bessel zeros; see the script for method.
#pragma once

namespace frozen {

struct KernelRef { double alpha, r, G, dG; };
inline constexpr KernelRef kernel_reference[] = {
    {1.2000000000000000, 0.010000000000000000, 0.11972110198459586, -0.0018421246316502443},
    {1.2000000000000000, 0.10000000000000000, 0.11881410261048704, -0.018225628501329774},
    {1.2000000000000000, 0.50000000000000000, 0.099491834171068475, -0.070946238889606084},
    {1.2000000000000000, 1.0000000000000000, 0.061469897571202391, -0.071131832866074738},
    {1.2000000000000000, 2.0000000000000000, 0.017389149115129017, -0.021639775936155233},
    {1.2000000000000000, 5.0000000000000000, 0.0011278415928449266, -0.00072961720065040413},
    {1.2000000000000000, 10.000000000000000, 0.00011810922200972352, -3.8447217447838712e-5},
    {1.2000000000000000, 20.000000000000000, 1.2476153477027428e-5, -2.0154157181190272e-6},
    {1.2000000000000000, 50.000000000000000, 6.5288807074369982e-7, -4.1932885741570121e-8},
    {1.4000000000000000, 0.010000000000000000, 0.10072603160704092, -0.0010004548218467112},
    {1.4000000000000000, 0.10000000000000000, 0.10023231532786796, -0.0099436558088910482},
    {1.4000000000000000, 0.50000000000000000, 0.089134561091180182, -0.042953654454139179},
    {1.4000000000000000, 1.0000000000000000, 0.063091330277533193, -0.055550924979563102},
    {1.4000000000000000, 2.0000000000000000, 0.020760882471961247, -0.025743806285133200},
    {1.4000000000000000, 5.0000000000000000, 0.00097944985759952439, -0.00072210579769766209},
    {1.4000000000000000, 10.000000000000000, 7.9517888531086049e-5, -2.8229857345847157e-5},
    {1.4000000000000000, 20.000000000000000, 7.0338293536247903e-6, -1.2168465536101902e-6},
    {1.4000000000000000, 50.000000000000000, 3.0243880461653900e-7, -2.0668013254960960e-8},
    {1.5000000000000000, 0.010000000000000000, 0.094744077986388056, -0.00079816229974013394},
    {1.5000000000000000, 0.10000000000000000, 0.094349960726851631, -0.0079423427948982926},
    {1.5000000000000000, 0.50000000000000000, 0.085364425709449751, -0.035266203144407065},
    {1.5000000000000000, 1.0000000000000000, 0.063184557589447939, -0.049198416866245326},
    {1.5000000000000000, 2.0000000000000000, 0.022439557829258658, -0.027254181025571254},
    {1.5000000000000000, 5.0000000000000000, 0.00088026608787910111, -0.00069998173112917401},
    {1.5000000000000000, 10.000000000000000, 6.1833441513083155e-5, -2.2875267258214682e-5},
    {1.5000000000000000, 20.000000000000000, 5.0141991822926894e-6, -8.9518667747213065e-7},
    {1.5000000000000000, 50.000000000000000, 1.9596122244179409e-7, -1.3786993789599860e-8},
    {1.8000000000000000, 0.010000000000000000, 0.083727654645696415, -0.00049308525178168504},
    {1.8000000000000000, 0.10000000000000000, 0.083483953212576464, -0.0049156781223031566},
    {1.8000000000000000, 0.50000000000000000, 0.077799920994027149, -0.022811353835463093},
    {1.8000000000000000, 1.0000000000000000, 0.062531998415738731, -0.036184861019897679},
    {1.8000000000000000, 2.0000000000000000, 0.026921939826342076, -0.029289775009361688},
    {1.8000000000000000, 5.0000000000000000, 0.00049052300570967500, -0.00055062774666683926},
    {1.8000000000000000, 10.000000000000000, 1.9013486929608418e-5, -7.8748462180816945e-6},
    {1.8000000000000000, 20.000000000000000, 1.2025645079888820e-6, -2.3367596648110170e-7},
    {1.8000000000000000, 50.000000000000000, 3.5598218306613695e-8, -2.7168414077582237e-9},
};

struct CenterRef { double alpha, G0; };  // G(0) = Gamma(2/alpha)/(2 pi alpha)
inline constexpr CenterRef center_reference[] = {
    {1.2000000000000000, 0.11973031310506852},
    {1.4000000000000000, 0.10073103403546518},
    {1.5000000000000000, 0.094748068897354901},
    {1.8000000000000000, 0.083730120110336238},
    {2.0000000000000000, 0.079577471545947668},
};

struct TailRef { double alpha, C; };  // G(r) ~ C r^{-2-alpha}
inline constexpr TailRef tail_reference[] = {
    {1.2000000000000000, 0.17674478557428508},
    {1.4000000000000000, 0.17860038243844473},
    {1.5000000000000000, 0.17116712969055234},
    {1.8000000000000000, 0.10084985986148908},
};

// L^p norms of (1+|x|^2)^{weight/2} G over R^2 (p, weight as listed)
struct NormRef { double alpha; int p; int weight; double value; };
inline constexpr NormRef norm_reference[] = {
    {1.2000000000000000, 2, 0, 0.19419754233227298},
    {1.2000000000000000, 1, 0, 1.0},
    {1.4000000000000000, 2, 0, 0.19344620784313713},
    {1.4000000000000000, 1, 0, 1.0},
    {1.5000000000000000, 2, 0, 0.19390924696853462},
    {1.5000000000000000, 1, 0, 1.0},
    {1.8000000000000000, 2, 0, 0.19688016769971758},
    {1.8000000000000000, 1, 0, 1.0},
    {2.0000000000000000, 2, 0, 0.19947114020071634},
    {2.0000000000000000, 1, 0, 1.0},
    {1.5, 2, 2, 0.66104742122574751},
    {2.0, 2, 2, 0.71920342396894903},
};

inline constexpr double j0_zeros[] = {
    2.4048255576957728,
    5.5200781102863106,
    8.6537279129110122,
    11.791534439014282,
    14.930917708487786,
    18.071063967910923,
    21.211636629879259,
    24.352471530749303,
    27.493479132040255,
    30.634606468431975,
    33.775820213573569,
    36.917098353664044
};
inline constexpr double j1_zeros[] = {
    3.8317059702075123,
    7.0155866698156188,
    10.173468135062722,
    13.323691936314223,
    16.470630050877633,
    19.615858510468242,
    22.760084380592772,
    25.903672087618383,
    29.046828534916855,
    32.189679910974404,
    35.332307550083865,
    38.474766234771615
};

}  // namespace frozen
