#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace suffopt {

enum class Sector { Heat, Mobility, Electricity };
enum class Carrier { Electricity, Hydrogen, SyntheticGas };
enum class Ambition { Low, High };

inline constexpr std::array<Sector, 3> kAllSectors = {Sector::Heat, Sector::Mobility,
                                                      Sector::Electricity};
inline constexpr std::array<Carrier, 3> kAllCarriers = {Carrier::Electricity, Carrier::Hydrogen,
                                                        Carrier::SyntheticGas};

// Invalid user input: malformed files, broken invariants in configuration data.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string_view to_string(Sector s);
std::string_view to_string(Carrier c);
std::string_view to_string(Ambition a);

Sector parse_sector(std::string_view text);
Carrier parse_carrier(std::string_view text);
Ambition parse_ambition(std::string_view text);

}  // namespace suffopt
