#pragma once
// Generated by gen_oracles.py (mpmath, 40 digits). Do not edit.
namespace oracle {
inline constexpr double kLambda1Half06 = 0.77459666924148337704;
inline constexpr double kLambda0Half06 = 1.2909944487358056284;
inline constexpr double kVrctHalf06 = 4.8355555555555555556;
inline constexpr double kVrctThird06 = 7.0416666666666666667;
inline constexpr double kVrctHalf06D05 = 9.6711111111111111111;
inline constexpr double kFreedmanHalf06 = 4.1750850863346154481;
inline constexpr double kFreedmanThird04 = 6.7167096425477978331;
inline constexpr double kRatioSchoenfeld08 = 1.0378125;
inline constexpr double kRatioFreedman08 = 1.0292602214167487806;
inline constexpr double kGammaHalf08 = 0.1073741824;
inline constexpr double kGammaThird08 = 0.0001048576;
inline constexpr double kRatioSchoenfeld06 = 1.2088888888888888889;
inline constexpr double kRatioFreedman06 = 1.1581932956007800477;
inline constexpr double kGammaHalf06 = 0.07776;
inline constexpr double kGammaThird06 = 0.00243;
inline constexpr double kRatioSchoenfeld04 = 1.77625;
inline constexpr double kRatioFreedman04 = 1.5543324865297995908;
inline constexpr double kGammaHalf04 = 0.047155603182596948554;
inline constexpr double kGammaThird04 = 0.0046784283811405857048;
inline constexpr double kZsumSquared = 6.1825572320197693875;
inline constexpr double kRawNV4 = 94.77259856197164583;
inline constexpr double kPowerV4N95 = 0.80083360018056940111;
inline constexpr double kVobsThird06A5 = 8.4708641975308641975;
inline constexpr double kPhi19 = 0.87400952234765480378;
inline constexpr double kPhi23 = 0.90179284933256069218;
inline constexpr double kPhi1030 = 0.98347675048097260167;
inline constexpr double kPhiHalfPoint7 = 0.67455961907533712762;
inline constexpr double kPhiMillion = 0.99999975000003125001;
inline constexpr double kMinPhiR01 = 0.87400952234765480378;
inline constexpr double kMinPhiR03 = 0.84032738381919070664;
inline constexpr double kMinPhiR05 = 0.78539816339744830962;
inline constexpr double kMinPhiR07 = 0.84032738381919070664;
inline constexpr double kSolveHalf095 = 4.8654581742283189021;
inline constexpr double kSolveHalf090 = 2.3558474638642209183;
inline constexpr double kSolve03090 = 1.6774553014499526184;
inline constexpr double kBoundM1 = 3.700573649910425251;
inline constexpr double kBoundM2 = 1.3382145008029074473;
inline constexpr double kBoundM3 = 2.2301489911173576449;
inline constexpr double kBoundM4 = 1.763087583364367379;
inline constexpr double kBoundAltM1 = 4.6038882703460822174;
inline constexpr double kBoundAltM2 = 2.5199358674861072577;
inline constexpr double kBoundAltM3 = 3.5002405948139288821;
inline constexpr double kBoundAltM4 = 2.7112747062866979061;
inline constexpr double kVobsBoundDesign = 7.0518518518518518519;
}  // namespace oracle
