#include "suffopt/types.hpp"

#include <algorithm>
#include <cctype>

namespace suffopt {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(Sector s) {
  switch (s) {
    case Sector::Heat: return "heat";
    case Sector::Mobility: return "mobility";
    case Sector::Electricity: return "electricity";
  }
  return "?";
}

std::string_view to_string(Carrier c) {
  switch (c) {
    case Carrier::Electricity: return "electricity";
    case Carrier::Hydrogen: return "hydrogen";
    case Carrier::SyntheticGas: return "synthetic_gas";
  }
  return "?";
}

std::string_view to_string(Ambition a) { return a == Ambition::Low ? "low" : "high"; }

Sector parse_sector(std::string_view text) {
  const auto key = lower(text);
  if (key == "heat") return Sector::Heat;
  if (key == "mobility" || key == "transport") return Sector::Mobility;
  if (key == "electricity") return Sector::Electricity;
  throw ConfigError("unknown sector '" + std::string(text) + "'");
}

Carrier parse_carrier(std::string_view text) {
  const auto key = lower(text);
  if (key == "electricity") return Carrier::Electricity;
  if (key == "hydrogen") return Carrier::Hydrogen;
  if (key == "synthetic_gas" || key == "syngas") return Carrier::SyntheticGas;
  throw ConfigError("unknown carrier '" + std::string(text) + "'");
}

Ambition parse_ambition(std::string_view text) {
  const auto key = lower(text);
  if (key == "low") return Ambition::Low;
  if (key == "high") return Ambition::High;
  throw ConfigError("unknown ambition '" + std::string(text) + "' (expected low|high)");
}

}  // namespace suffopt
