#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sdde/approximation.hpp"
#include "sdde/error.hpp"
#include "sdde/model.hpp"

namespace sdde {

using ModelParams = std::map<std::string, double>;

class UnknownModel : public DomainError {
 public:
  using DomainError::DomainError;
};

struct ModelCatalogEntry {
  std::string id;
  std::string description;
  double alpha = 1.0;
  double beta = 1.0;
  ModelParams defaults;
  std::function<SddeModel(const ModelParams&)> make;
};

/// Built-in scalar models.
const std::vector<ModelCatalogEntry>& list_models();

const ModelCatalogEntry& find_model(const std::string& id);

/// Builds a catalog model. Unlisted parameter names are rejected.
SddeModel make_model(const std::string& id, const ModelParams& params = {});

/// Lipschitz approximations of a catalog model. Only holder-drift has a
/// genuine mollification (linear inside |x(0)| <= eps); every other entry is
/// already Lipschitz and maps to itself.
MollifiedFamily mollified_family(const std::string& id, const ModelParams& params = {});

}  // namespace sdde
