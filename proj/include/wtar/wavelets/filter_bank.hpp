#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "wtar/errors.hpp"

namespace wtar::wavelets {

enum class Family {
    Haar,
    DaubechiesExtremalPhase,   // D(N), N = 1..10
    DaubechiesLeastAsymmetric  // LA(N), N = 4..10
};

inline std::string family_name(Family f) {
    switch (f) {
        case Family::Haar: return "haar";
        case Family::DaubechiesExtremalPhase: return "d";
        case Family::DaubechiesLeastAsymmetric: return "la";
    }
    return "?";
}

namespace detail {

inline constexpr double kDaub1[2] = {
    0.70710678118654752,
    0.70710678118654752};

inline constexpr double kDaub2[4] = {
    0.48296291314453414,
    0.83651630373780791,
    0.22414386804201338,
    -0.12940952255126038};

inline constexpr double kDaub3[6] = {
    0.33267055295008262,
    0.80689150931109258,
    0.45987750211849157,
    -0.13501102001025459,
    -0.085441273882026662,
    0.035226291885709537};

inline constexpr double kDaub4[8] = {
    0.23037781330889650,
    0.71484657055291565,
    0.63088076792985891,
    -0.027983769416859854,
    -0.18703481171909308,
    0.030841381835560764,
    0.032883011666885200,
    -0.010597401785069032};

inline constexpr double kDaub5[10] = {
    0.16010239797419291,
    0.60382926979718967,
    0.72430852843777293,
    0.13842814590132073,
    -0.24229488706638203,
    -0.032244869584638375,
    0.077571493840045714,
    -0.0062414902127982743,
    -0.012580751999081999,
    0.0033357252854737713};

inline constexpr double kDaub6[12] = {
    0.11154074335010946,
    0.49462389039845309,
    0.75113390802109535,
    0.31525035170919763,
    -0.22626469396543982,
    -0.12976686756726194,
    0.097501605587323049,
    0.027522865530305729,
    -0.031582039317486030,
    0.00055384220116149614,
    0.0047772575109455106,
    -0.0010773010853084796};

inline constexpr double kDaub7[14] = {
    0.077852054085009179,
    0.39653931948191731,
    0.72913209084623512,
    0.46978228740519312,
    -0.14390600392856498,
    -0.22403618499387498,
    0.071309219266830265,
    0.080612609151083072,
    -0.038029936935014414,
    -0.016574541630666881,
    0.012550998556099841,
    0.00042957797292136652,
    -0.0018016407040474909,
    0.00035371379997452025};

inline constexpr double kDaub8[16] = {
    0.054415842243104010,
    0.31287159091429997,
    0.67563073629728981,
    0.58535468365420671,
    -0.015829105256349306,
    -0.28401554296154693,
    0.00047248457391328277,
    0.12874742662047846,
    -0.017369301001807546,
    -0.044088253930794752,
    0.013981027917398282,
    0.0087460940474057767,
    -0.0048703529934515743,
    -0.00039174037337694705,
    0.00067544940645056937,
    -0.00011747678412476953};

inline constexpr double kDaub9[18] = {
    0.038077947363878347,
    0.24383467461259035,
    0.60482312369011111,
    0.65728807805130054,
    0.13319738582500758,
    -0.29327378327917491,
    -0.096840783222976461,
    0.14854074933810638,
    0.030725681479333379,
    -0.067632829061329974,
    0.00025094711483145196,
    0.022361662123679097,
    -0.0047232047577513973,
    -0.0042815036824634298,
    0.0018476468830562265,
    0.00023038576352319597,
    -0.00025196318894271014,
    3.9347320316271599e-5};

inline constexpr double kDaub10[20] = {
    0.026670057900555554,
    0.18817680007769149,
    0.52720118893172559,
    0.68845903945360357,
    0.28117234366057746,
    -0.24984642432731538,
    -0.19594627437737704,
    0.12736934033579326,
    0.093057364603572351,
    -0.071394147166397087,
    -0.029457536821875813,
    0.033212674059341002,
    0.0036065535669561697,
    -0.010733175483330575,
    0.0013953517470529012,
    0.0019924052951850561,
    -0.00068585669495971163,
    -0.00011646685512928545,
    9.3588670320069591e-5,
    -1.3264202894521245e-5};

inline constexpr double kSymlet4[8] = {
    0.032223100604051468,
    -0.012603967262031304,
    -0.099219543576633533,
    0.29785779560530605,
    0.80373875180513208,
    0.49761866763277499,
    -0.029635527646002492,
    -0.075765714789502213};

inline constexpr double kSymlet5[10] = {
    0.019538882735249827,
    -0.021101834024689041,
    -0.17532808990805622,
    0.016602105764510848,
    0.63397896345679206,
    0.72340769040404079,
    0.19939753397685560,
    -0.039134249302313844,
    0.029519490925706261,
    0.027333068344998769};

inline constexpr double kSymlet6[12] = {
    -0.0078007083250323804,
    0.0017677118642540077,
    0.044724901770781385,
    -0.021060292512370848,
    -0.072637522786376583,
    0.33792942172816583,
    0.78764114102865100,
    0.49105594192797373,
    -0.048311742585698055,
    -0.11799011114852003,
    0.0034907120842221625,
    0.015404109327044824};

inline constexpr double kSymlet7[14] = {
    0.0022918339540537712,
    -0.0032832978474668107,
    -0.018126605131338461,
    0.020464207577546034,
    0.044742349468352377,
    -0.10101092086842030,
    -0.056804476889666969,
    0.48361091568226770,
    0.78192159329172812,
    0.36021846090626020,
    -0.064131289807385821,
    -0.064908003547188486,
    0.017213376300804503,
    0.012015419283549189};

inline constexpr double kSymlet8[16] = {
    0.0018899503327676892,
    -0.00030292051472413308,
    -0.014952258337062199,
    0.0038087520138944895,
    0.049137179673730287,
    -0.027219029917103486,
    -0.051945838107881801,
    0.36444189483617894,
    0.77718575169962803,
    0.48135965125905339,
    -0.061273359067811078,
    -0.14329423835127266,
    0.0076074873249766082,
    0.031695087811525991,
    -0.00054213233180001069,
    -0.0033824159510050026};

inline constexpr double kSymlet9[18] = {
    0.0010694900329086119,
    -0.00047315449868004354,
    -0.010264064027633120,
    0.0088592674934002667,
    0.062077789302885748,
    -0.018233770779395506,
    -0.19155083129728433,
    0.035272488035271043,
    0.61733844914093415,
    0.71789708276441240,
    0.23876091460730517,
    -0.054568958430833351,
    0.00058346274612498183,
    0.030224878858275188,
    -0.011528210207679186,
    -0.013271967781817134,
    0.00061978088898550708,
    0.0014009155259146562};

inline constexpr double kSymlet10[20] = {
    -0.00041011591580439833,
    0.00034014926631480986,
    0.0050716491985317990,
    -0.0011404297952173285,
    -0.023005461353497510,
    -0.00086875210968925814,
    0.033842354663575221,
    -0.067089907808381802,
    -0.087878711511975135,
    0.34021601302346215,
    0.76695483656060956,
    0.51370987334802634,
    -0.015019238839137860,
    -0.12155210554854894,
    0.026240365058448987,
    0.049686126646942882,
    0.00059568278374251904,
    -0.0070567640625873042,
    0.00071542054205433972,
    0.00086257822622597243};

inline const double* daub_table(int n) {
    switch (n) {
        case 1: return kDaub1;
        case 2: return kDaub2;
        case 3: return kDaub3;
        case 4: return kDaub4;
        case 5: return kDaub5;
        case 6: return kDaub6;
        case 7: return kDaub7;
        case 8: return kDaub8;
        case 9: return kDaub9;
        case 10: return kDaub10;
    }
    return nullptr;
}

inline const double* symlet_table(int n) {
    switch (n) {
        case 4: return kSymlet4;
        case 5: return kSymlet5;
        case 6: return kSymlet6;
        case 7: return kSymlet7;
        case 8: return kSymlet8;
        case 9: return kSymlet9;
        case 10: return kSymlet10;
    }
    return nullptr;
}

}  // namespace detail

/// Orthonormal two-channel filter pair for one wavelet family and order.
///
/// Low-pass taps l_0..l_{L-1} satisfy sum(l) = sqrt(2) and sum(l^2) = 1;
/// the high-pass is the quadrature mirror h_k = (-1)^k l_{L-1-k}.
struct FilterBank {
    Family family = Family::Haar;
    int vanishing_moments = 1;       // N; filter length L = 2N
    std::vector<double> low_pass;
    std::vector<double> high_pass;

    int length() const { return static_cast<int>(low_pass.size()); }
};

/// Looks up the published low-pass taps for (family, N) and derives the
/// high-pass by the quadrature mirror rule.
///
/// Supported: (Haar, 1), (D, 1..10), (LA, 4..10); anything else throws
/// UnsupportedWavelet.
inline FilterBank build_filter_bank(Family family, int vanishing_moments) {
    const double* taps = nullptr;
    switch (family) {
        case Family::Haar:
            if (vanishing_moments == 1) taps = detail::kDaub1;
            break;
        case Family::DaubechiesExtremalPhase:
            taps = detail::daub_table(vanishing_moments);
            break;
        case Family::DaubechiesLeastAsymmetric:
            taps = detail::symlet_table(vanishing_moments);
            break;
    }
    if (taps == nullptr) {
        throw UnsupportedWavelet("no filter bank for family '" + family_name(family) +
                                 "' with N=" + std::to_string(vanishing_moments));
    }
    FilterBank bank;
    bank.family = family;
    bank.vanishing_moments = vanishing_moments;
    const int len = 2 * vanishing_moments;
    bank.low_pass.assign(taps, taps + len);
    bank.high_pass.resize(len);
    for (int k = 0; k < len; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        bank.high_pass[k] = sign * bank.low_pass[len - 1 - k];
    }
    return bank;
}

}  // namespace wtar::wavelets
