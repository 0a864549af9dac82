#ifndef KPLANE_ERRORS_HPP
#define KPLANE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kplane {

// Base class for everything this library throws on purpose. Anything else
// escaping a public entry point is a bug.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define KPLANE_DEFINE_ERROR(NAME)                          \
  class NAME : public Error {                              \
   public:                                                 \
    explicit NAME(const std::string& what) : Error(what) {} \
  }

KPLANE_DEFINE_ERROR(DegenerateSpan);        // numerically dependent spanning set
KPLANE_DEFINE_ERROR(DimensionMismatch);     // ambient dims or subspace dims do not fit
KPLANE_DEFINE_ERROR(RankDeficient);         // parametrization loses rank
KPLANE_DEFINE_ERROR(TransversalityViolation);
KPLANE_DEFINE_ERROR(RootFindFailure);
KPLANE_DEFINE_ERROR(NormalWedgeDegenerate); // normals of paired surfaces nearly parallel
KPLANE_DEFINE_ERROR(WrongScenario);         // operation applied to a configuration it rejects
KPLANE_DEFINE_ERROR(TooManyMaps);
KPLANE_DEFINE_ERROR(ParseError);
KPLANE_DEFINE_ERROR(SchemaError);
KPLANE_DEFINE_ERROR(ValidationError);

#undef KPLANE_DEFINE_ERROR

}  // namespace kplane

#endif
