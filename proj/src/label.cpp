#include "stance/label.hpp"

#include "stance/error.hpp"
#include "text_util.hpp"

namespace stance {

std::string_view to_string(StanceLabel label) {
  switch (label) {
    case StanceLabel::Against: return "Against";
    case StanceLabel::Favor: return "Favor";
    case StanceLabel::None: return "None";
  }
  return "?";
}

std::string_view to_semeval(StanceLabel label) {
  switch (label) {
    case StanceLabel::Against: return "AGAINST";
    case StanceLabel::Favor: return "FAVOR";
    case StanceLabel::None: return "NONE";
  }
  return "?";
}

StanceLabel parse_stance(std::string_view text) {
  const std::string key = detail::ascii_lower(detail::trim(text));
  if (key == "favor") return StanceLabel::Favor;
  if (key == "against") return StanceLabel::Against;
  if (key == "none") return StanceLabel::None;
  throw DataError("unknown stance '" + std::string(text) + "'");
}

}  // namespace stance
