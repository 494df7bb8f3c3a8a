#pragma once

#include <stdexcept>
#include <string>

namespace btchar {

// Error categories, also used to derive CLI exit codes.
enum class errc {
  schema,               // malformed scenario / bad input shape
  budget,               // configured budget exceeded
  precision,            // certification impossible at current precision
  oracle_disagreement,  // two routes that must agree did not (internal bug)
  domain,               // precondition violated by the caller
  io,
};

class error : public std::runtime_error {
 public:
  error(errc c, const std::string& what) : std::runtime_error(what), code_(c) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

struct precision_insufficient : error {
  explicit precision_insufficient(const std::string& w)
      : error(errc::precision, "PrecisionInsufficient: " + w) {}
};
struct not_irreducible : error {
  explicit not_irreducible(const std::string& w)
      : error(errc::domain, "NotIrreducible: " + w) {}
};
struct unsupported_shape : error {
  explicit unsupported_shape(const std::string& w)
      : error(errc::precision, "UnsupportedShape: " + w) {}
};
struct negative_valuation : error {
  explicit negative_valuation(const std::string& w)
      : error(errc::domain, "NegativeValuation: " + w) {}
};
struct malformed_chain : error {
  explicit malformed_chain(const std::string& w)
      : error(errc::domain, "MalformedChain: " + w) {}
};
struct element_not_in_parahoric : error {
  explicit element_not_in_parahoric(const std::string& w)
      : error(errc::domain, "ElementNotInParahoric: " + w) {}
};
struct not_an_oe_chain : error {
  explicit not_an_oe_chain(const std::string& w)
      : error(errc::domain, "NotAnOEChain: " + w) {}
};
struct budget_exceeded : error {
  explicit budget_exceeded(const std::string& w)
      : error(errc::budget, "BudgetExceeded: " + w) {}
};
struct patch_too_small : error {
  explicit patch_too_small(const std::string& w)
      : error(errc::budget, "PatchTooSmall: " + w) {}
};
struct oracle_disagreement : error {
  explicit oracle_disagreement(const std::string& w)
      : error(errc::oracle_disagreement, "OracleDisagreement: " + w) {}
};
struct minimality_required : error {
  explicit minimality_required(const std::string& w)
      : error(errc::domain, "MinimalityRequired: " + w) {}
};
struct extended_action_needed : error {
  explicit extended_action_needed(const std::string& w)
      : error(errc::domain, "ExtendedActionNeeded: " + w) {}
};
struct not_stabilized : error {
  explicit not_stabilized(const std::string& w)
      : error(errc::budget, "NotStabilized: " + w) {}
};
struct genericity_ambiguous : error {
  explicit genericity_ambiguous(const std::string& w)
      : error(errc::oracle_disagreement, "GenericityAmbiguous: " + w) {}
};
struct not_elliptic : error {
  explicit not_elliptic(const std::string& w)
      : error(errc::domain, "NotElliptic: " + w) {}
};
struct schema_error : error {
  explicit schema_error(const std::string& w)
      : error(errc::schema, "SchemaError: " + w) {}
};

// Three-valued certified verdict.  `indeterminate` always means "raise the
// precision and retry", never "probably".
enum class cert { yes, no, indeterminate };

inline const char* to_string(cert c) {
  switch (c) {
    case cert::yes: return "yes";
    case cert::no: return "no";
    default: return "indeterminate";
  }
}

}  // namespace btchar
