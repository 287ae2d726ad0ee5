#pragma once

#include <string>
#include <vector>

namespace arf {

enum class ClaimStatus { Holds, Fails, NotApplicable, Finding };

/// Reference claims are published identities; pipeline claims are internal
/// consistency checks of this engine. They map to different exit codes.
enum class ClaimKind { Reference, Pipeline };

const char* to_string(ClaimStatus s);
const char* to_string(ClaimKind k);

struct ClaimRecord {
  std::string id;
  ClaimKind kind = ClaimKind::Reference;
  ClaimStatus status = ClaimStatus::NotApplicable;
  std::string detail;
  /// Entry or expression where a check failed, or the localized term family.
  std::string witness;
};

class VerificationReport {
 public:
  void add(ClaimRecord r);
  void merge(const VerificationReport& other);
  const std::vector<ClaimRecord>& claims() const { return claims_; }
  /// nullptr if absent.
  const ClaimRecord* find(const std::string& id) const;
  const ClaimRecord& at(const std::string& id) const;

  bool any(ClaimKind kind, ClaimStatus status) const;

 private:
  std::vector<ClaimRecord> claims_;
};

/// Every claim id a complete verification report carries, in report order.
const std::vector<std::string>& claim_registry();

}  // namespace arf
