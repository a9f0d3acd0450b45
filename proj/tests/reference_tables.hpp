#pragma once

#include <array>

// Energies and beta printed in the reference tables, four decimals. Phantom
// columns count roots at +infinity and -infinity (XXZ tables only).
namespace reftables {

struct Row {
  double re;
  double im;
  int beta;
  int plus_inf;
  int minus_inf;
};

inline constexpr std::array<Row, 16> table1_left{{
    {-7.8613, 0.0000, 0, 0, 0},
    {-6.4147, 0.0000, 1, 0, 0},
    {-2.6983, 0.0000, 1, 0, 0},
    {-2.0665, 0.0000, 0, 0, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {0.0000, 0.0000, 1, 0, 0},
    {0.0000, 0.0000, -1, 0, 0},
    {0.0000, 0.0000, -1, 0, 0},
    {0.0000, 0.0000, 1, 0, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {1.4107, 0.0000, 2, 0, 0},
    {2.0665, 0.0000, 2, 0, 0},
    {2.6983, 0.0000, 1, 0, 0},
    {6.4147, 0.0000, 1, 0, 0},
    {6.4506, 0.0000, 0, 0, 0},
}};

inline constexpr std::array<Row, 16> table1_right{{
    {-9.2437, 0.0000, 0, 0, 0},
    {-6.8499, 0.0000, 0, 0, 0},
    {-6.5659, 0.0000, 1, 0, 0},
    {-0.4967, 0.0000, 1, 0, 0},
    {-0.4962, 0.0000, 0, 0, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {0.0000, 0.0000, 1, 0, 0},
    {0.0000, 0.0000, 1, 0, 0},
    {0.0000, 0.0000, 1, 0, 0},
    {0.0000, 0.0000, 1, 0, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {0.4967, 0.0000, 1, 0, 0},
    {6.5659, 0.0000, 1, 0, 0},
    {6.8499, 0.0000, 2, 0, 0},
    {9.7400, 0.0000, 2, 0, 0},
}};

inline constexpr std::array<Row, 16> table1_1{{
    {-5.4687, 4.7280, 0, 0, 0},
    {-4.4309, 4.6335, 1, 0, 0},
    {-2.9677, 5.0873, 0, 0, 0},
    {-0.7807, -4.5312, 1, 0, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {0.0000, 0.0000, 1, 0, 0},
    {0.0000, 0.0000, -1, 0, 0},
    {0.0000, 0.0000, 1, 0, 0},
    {0.0000, 0.0000, -1, 0, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {0.7807, 4.5312, 1, 0, 0},
    {0.8989, 4.5545, 0, 0, 0},
    {2.9677, -5.0873, 2, 0, 0},
    {4.4309, -4.6335, 1, 0, 0},
    {4.5698, -9.2825, 0, 0, 0},
}};

inline constexpr std::array<Row, 32> table3_first{{
    {-10.3014, 0.0000, 0, 0, 0},
    {-8.0739, 0.0000, 1, 0, 0},
    {-8.0306, 0.0000, 1, 0, 0},
    {-7.2138, 0.0000, 0, 0, 0},
    {-5.4956, 0.0000, 0, 0, 0},
    {-4.7721, 0.0000, 0, 0, 0},
    {-4.7721, 0.0000, 0, 0, 0},
    {-4.6690, 0.0000, 1, 0, 0},
    {-4.6690, 0.0000, -1, 0, 0},
    {-4.6653, 0.0000, -1, 0, 0},
    {-4.6653, 0.0000, 1, 0, 0},
    {-3.7781, 0.0000, 1, 0, 0},
    {-3.7781, 0.0000, -1, 0, 0},
    {-3.7684, 0.0000, 1, 0, 0},
    {-3.7684, 0.0000, -1, 0, 0},
    {-3.4956, 0.0000, 0, 0, 0},
    {-3.4956, 0.0000, 0, 0, 0},
    {-2.5054, 0.0000, 2, 0, 0},
    {-2.5048, 0.0000, 2, 0, 0},
    {-1.8716, 0.0000, 0, 0, 0},
    {-1.8716, 0.0000, 0, 0, 0},
    {-1.5201, 0.0000, 1, 0, 0},
    {-1.4707, 0.0000, 1, 0, 0},
    {-1.1901, 0.0000, 0, 0, 0},
    {-0.5051, 0.0000, -2, 0, 0},
    {-0.5051, 0.0000, 2, 0, 0},
    {-0.5048, 0.0000, -2, 0, 0},
    {-0.5048, 0.0000, 2, 0, 0},
    {0.1682, 0.0000, -1, 0, 0},
    {0.1682, 0.0000, 1, 0, 0},
    {0.2108, 0.0000, 1, 0, 0},
    {0.2108, 0.0000, -1, 0, 0},
}};

inline constexpr std::array<Row, 32> table3_second{{
    {0.3661, 0.0000, 0, 0, 0},
    {0.4154, 0.0000, 1, 0, 0},
    {0.4170, 0.0000, 1, 0, 0},
    {0.5051, 0.0000, 0, 0, 0},
    {0.5051, 0.0000, 0, 0, 0},
    {1.4707, 0.0000, 1, 0, 0},
    {1.5201, 0.0000, 1, 0, 0},
    {2.5048, 0.0000, 0, 0, 0},
    {2.7721, 0.0000, 0, 0, 0},
    {2.7721, 0.0000, 0, 0, 0},
    {2.9806, 0.0000, 1, 0, 0},
    {2.9806, 0.0000, -1, 0, 0},
    {2.9837, 0.0000, -1, 0, 0},
    {2.9837, 0.0000, 1, 0, 0},
    {3.0057, 0.0000, 0, 0, 0},
    {3.4955, 0.0000, 2, 0, 0},
    {3.4955, 0.0000, -2, 0, 0},
    {3.4956, 0.0000, -2, 0, 0},
    {3.4956, 0.0000, 2, 0, 0},
    {3.7684, 0.0000, -1, 0, 0},
    {3.7684, 0.0000, 1, 0, 0},
    {3.7781, 0.0000, 1, 0, 0},
    {3.7781, 0.0000, -1, 0, 0},
    {3.8717, 0.0000, 0, 0, 0},
    {3.8717, 0.0000, 0, 0, 0},
    {4.4862, 0.0000, 3, 0, 0},
    {4.4862, 0.0000, 3, 0, 0},
    {5.4942, 0.0000, 2, 0, 0},
    {5.4956, 0.0000, 2, 0, 0},
    {6.1122, 0.0000, 1, 0, 0},
    {6.1692, 0.0000, 1, 0, 0},
    {6.3631, 0.0000, 0, 0, 0},
}};

inline constexpr std::array<Row, 32> table4a{{
    {-7.7107, 6.8714, 0, 0, 0},
    {-7.2495, 6.8431, 1, 0, 0},
    {-5.5796, 7.1659, 0, 0, 0},
    {-4.0896, 2.5948, 0, 0, 0},
    {-3.3265, 4.4067, -1, 0, 0},
    {-3.3265, 4.4067, 1, 0, 0},
    {-3.3089, 7.1260, 1, 0, 0},
    {-3.0088, 7.1181, 0, 0, 0},
    {-2.9472, 4.5576, 2, 0, 0},
    {-2.9472, 4.5576, -2, 0, 0},
    {-2.8377, 2.7624, 1, 0, 0},
    {-2.8377, 2.7624, -1, 0, 0},
    {-2.6441, 4.4197, 1, 0, 0},
    {-2.6441, 4.4197, -1, 0, 0},
    {-2.5808, 2.9434, 0, 0, 0},
    {-2.5808, 2.9434, 0, 0, 0},
    {-2.3161, 0.1055, -1, 0, 0},
    {-2.3161, 0.1055, 1, 0, 0},
    {-2.1256, -1.5823, 1, 0, 0},
    {-1.9583, 2.7888, 1, 0, 0},
    {-1.4460, 4.6528, 0, 0, 0},
    {-1.4460, 4.6528, 0, 0, 0},
    {-1.4378, 4.6199, -1, 0, 0},
    {-1.4378, 4.6199, 1, 0, 0},
    {-1.3950, 3.4037, 0, 0, 0},
    {-1.3950, 3.4037, 0, 0, 0},
    {-1.2051, 0.5145, 0, 0, 0},
    {-1.2051, 0.5145, 0, 0, 0},
    {-1.1220, -2.4925, 2, 0, 0},
    {-0.3412, 2.0387, 1, 0, 0},
    {-0.1009, 0.8699, 0, 0, 0},
    {-0.0627, 0.8090, -1, 0, 0},
}};

inline constexpr std::array<Row, 32> table4b{{
    {0.2387, 0.7843, 0, 0, 0},
    {0.3412, -2.0387, 1, 0, 0},
    {0.3954, 1.1998, -1, 0, 0},
    {0.3954, 1.1998, 1, 0, 0},
    {1.1220, 2.4925, 0, 0, 0},
    {1.2769, 6.7410, 1, 0, 0},
    {1.2927, 6.7368, 0, 0, 0},
    {1.4460, -4.6528, 0, 0, 0},
    {1.4460, -4.6528, 0, 0, 0},
    {1.4554, -1.9007, -1, 0, 0},
    {1.4554, -1.9007, 1, 0, 0},
    {2.2504, -0.0822, 0, 0, 0},
    {2.2504, -0.0822, 0, 0, 0},
    {2.3015, -9.5843, 0, 0, 0},
    {2.3161, -0.1055, -1, 0, 0},
    {2.3161, -0.1055, 1, 0, 0},
    {2.6441, -4.4197, -1, 0, 0},
    {2.6441, -4.4197, 1, 0, 0},
    {2.6640, -5.9503, -2, 0, 0},
    {2.6640, -5.9503, 2, 0, 0},
    {2.7835, -6.0009, -1, 0, 0},
    {2.7835, -6.0009, 1, 0, 0},
    {2.9472, -4.5576, 0, 0, 0},
    {2.9472, -4.5576, 0, 0, 0},
    {3.2342, -5.9163, -2, 0, 0},
    {3.2342, -5.9163, 2, 0, 0},
    {3.3089, -7.1260, 1, 0, 0},
    {4.0896, -2.5948, 2, 0, 0},
    {4.2559, -2.4972, 1, 0, 0},
    {5.3528, -10.3157, 1, 0, 0},
    {6.4458, -12.9612, 1, 0, 0},
    {6.6317, -9.7876, 0, 0, 0},
}};

inline constexpr std::array<Row, 16> table5_left{{
    {-6.8662, 0.0000, 0, 0, 0},
    {-4.0393, 0.0000, -1, 0, 0},
    {-3.9613, 0.0000, 1, 0, 0},
    {-2.2048, 0.0000, 0, 0, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {0.0000, 0.0000, -1, 0, 0},
    {0.0000, 0.0000, 1, 0, 0},
    {0.0000, 0.0000, 1, 0, 0},
    {0.0000, 0.0000, -1, 0, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {2.2042, 0.0000, 2, 0, 0},
    {2.2048, 0.0000, -2, 0, 0},
    {3.9613, 0.0000, -1, 0, 0},
    {4.0393, 0.0000, 1, 0, 0},
    {4.6620, 0.0000, 0, 0, 0},
}};

inline constexpr std::array<Row, 16> table5_right{{
    {-6.8657, 0.0000, 0, 0, 0},
    {-4.0000, 0.0000, -1, 1, 0},
    {-4.0000, 0.0000, 1, 0, 1},
    {-2.2049, 0.0000, 0, 0, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {0.0000, 0.0000, -1, 1, 0},
    {0.0000, 0.0000, 1, 0, 1},
    {0.0000, 0.0000, 1, 0, 1},
    {0.0000, 0.0000, -1, 1, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {2.2049, 0.0000, 2, 0, 2},
    {2.2049, 0.0000, -2, 2, 0},
    {4.0000, 0.0000, -1, 1, 0},
    {4.0000, 0.0000, 1, 0, 1},
    {4.6608, 0.0000, 0, 0, 0},
}};

inline constexpr std::array<Row, 16> table6_left{{
    {-6.6424, 2.5971, 0, 0, 0},
    {-4.0385, 0.1151, 1, 0, 0},
    {-3.9598, -0.1151, -1, 0, 0},
    {-2.4648, 4.2288, 0, 0, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {0.0000, 0.0000, -1, 0, 0},
    {0.0000, 0.0000, 1, 0, 0},
    {0.0000, 0.0000, -1, 0, 0},
    {0.0000, 0.0000, 1, 0, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {2.4648, -4.2288, -2, 0, 0},
    {2.4669, -4.2324, 2, 0, 0},
    {3.9598, 0.1151, 1, 0, 0},
    {4.0385, -0.1151, -1, 0, 0},
    {4.1755, 1.6352, 0, 0, 0},
}};

inline constexpr std::array<Row, 16> table6_right{{
    {-6.6434, 2.5956, 0, 0, 0},
    {-4.0000, 0.0000, 1, 0, 1},
    {-4.0000, 0.0000, -1, 1, 0},
    {-2.4645, 4.2284, 0, 0, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {0.0000, 0.0000, 0, 0, 0},
    {0.0000, 0.0000, -1, 1, 0},
    {0.0000, 0.0000, 1, 0, 1},
    {0.0000, 0.0000, -1, 1, 0},
    {0.0000, 0.0000, 1, 0, 1},
    {0.0000, 0.0000, 0, 0, 0},
    {2.4645, -4.2284, -2, 2, 0},
    {2.4645, -4.2284, 2, 0, 2},
    {4.0000, 0.0000, 1, 0, 1},
    {4.0000, 0.0000, -1, 1, 0},
    {4.1789, 1.6327, 0, 0, 0},
}};

}  // namespace reftables
