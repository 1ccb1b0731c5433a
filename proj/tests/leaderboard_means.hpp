#pragma once

#include <map>
#include <string>

#include "vessel/challenge.hpp"

namespace vessel::tables {

inline Aggregate means(double cldice, double iou, double nsd) {
  Aggregate a;
  a.cases = 1;
  a.metrics["clDice"] = {cldice, 0.0};
  a.metrics["IoU"] = {iou, 0.0};
  a.metrics["NSD"] = {nsd, 0.0};
  return a;
}

/// Task 1 team means (clDice, IoU, NSD).
inline std::map<std::string, Aggregate> task1() {
  return {{"UW-Madison-AIR", means(0.691, 0.505, 0.626)},
          {"Haqan", means(0.662, 0.445, 0.593)},
          {"MedInsight-ViseurAI", means(0.731, 0.534, 0.704)},
          {"GLIMS", means(0.769, 0.588, 0.734)}};
}

/// Task 2 per-class team means.
inline std::map<std::string, ClassAggregates> task2() {
  return {{"UW-Madison-AIR", {means(0.830, 0.512, 0.697), means(0.704, 0.371, 0.625)}},
          {"Haqan", {means(0.682, 0.490, 0.595), means(0.588, 0.350, 0.550)}},
          {"MedInsight-ViseurAI", {means(0.518, 0.385, 0.509), means(0.446, 0.352, 0.472)}},
          {"GLIMS", {means(0.678, 0.565, 0.684), means(0.634, 0.511, 0.643)}}};
}

}  // namespace vessel::tables
