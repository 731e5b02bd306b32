#pragma once

namespace qcav {

/// SI constants used by every formula. Defaults are CODATA 2018.
struct PhysicalConstants {
  double hbar = 1.054571817e-34;      // J s
  double e_charge = 1.602176634e-19;  // C
  double k_B = 1.380649e-23;          // J/K
  double m_he3 = 5.008234e-27;        // kg, 3He atom
  double m_he4 = 6.646479e-27;        // kg, 4He atom

  /// Throws DomainError unless every field is strictly positive.
  void validate() const;
};

inline constexpr PhysicalConstants codata2018{};

}  // namespace qcav
