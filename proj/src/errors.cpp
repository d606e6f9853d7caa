#include "dgmv/errors.hpp"

namespace dgmv {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::BadDimension: return "BadDimension";
    case Errc::NonzeroDrift: return "NonzeroDrift";
    case Errc::ZeroBookValue: return "ZeroBookValue";
    case Errc::NegativeUnderlying: return "NegativeUnderlying";
    case Errc::BadOptionParams: return "BadOptionParams";
    case Errc::AsymmetricCustomGamma: return "AsymmetricCustomGamma";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ConfigError: return "ConfigError";
    case Errc::EigenFailure: return "EigenFailure";
    case Errc::SingularH: return "SingularH";
    case Errc::Infeasible: return "Infeasible";
    case Errc::SingularKKT: return "SingularKKT";
    case Errc::NotPD: return "NotPD";
    case Errc::ZeroValues: return "ZeroValues";
    case Errc::SingularNormalEquations: return "SingularNormalEquations";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::CustomNotRepriceable: return "CustomNotRepriceable";
    case Errc::ExpiryCrossed: return "ExpiryCrossed";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace dgmv
