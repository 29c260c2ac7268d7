#pragma once

// File formats: JSON for geometries, sweeps, Monte Carlo results, fit
// results and spectra; CSV tables for sweeps, MC runs, spectra and input
// series. Doubles are written with round-trip precision so repeated runs give
// byte-identical files.

#include <iosfwd>
#include <string>
#include <vector>

#include "trapnoise/analytics.hpp"
#include "trapnoise/fitting.hpp"
#include "trapnoise/geometry.hpp"
#include "trapnoise/lineshape.hpp"
#include "trapnoise/montecarlo.hpp"

namespace trapnoise {

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// {n_traps, r_min_nm, r_max_nm, epsilon_r, traps: [{r_nm, theta_rad, f_kv_cm}]}
std::string geometry_to_json(const TrapGeometry& geometry);
TrapGeometry geometry_from_json(const std::string& text);

/// control,e0_kv_cm,p,mu_mev,sigma2_mev2,fwhm_voigt_mev,center_nm
void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& sweep);
std::string sweep_to_json(const std::vector<SweepPoint>& sweep, const std::string& control);

/// Sweep columns plus std_mev, stderr_mean_mev, stderr_std_mev,
/// fwhm_gaussian_mev.
void write_mc_csv(std::ostream& os, const MCResult& result);
std::string mc_to_json(const MCResult& result, const std::string& control);
void write_agreement_csv(std::ostream& os, const std::vector<AgreementRow>& rows);

std::string fit_result_to_json(const FitResult& fit);
FitResult fit_result_from_json(const std::string& text);

/// "# axis=<energy_mev|wavelength_nm>" (plus an optional
/// "# noise=<poisson|gaussian>:<scale>") then "x,intensity" rows.
void write_spectrum_csv(std::ostream& os, const SpectrumRecord& spectrum);
SpectrumRecord read_spectrum_csv(std::istream& is);
std::string spectrum_to_json(const SpectrumRecord& spectrum);

/// Rows of x,y[,y_err]; '#' comments and one non-numeric header line are
/// skipped. Throws DataError carrying the 1-based line number.
MeasurementSeries read_series_csv(std::istream& is);

/// Round-trip formatting used by every writer.
std::string format_double(double v);

}  // namespace trapnoise
