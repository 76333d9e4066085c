#pragma once

#include <span>
#include <string>
#include <string_view>

#include "denise/evaluation.hpp"
#include "denise/pipeline.hpp"

namespace denise {

// Full audit of one document.
std::string report_json(const PipelineReport& report);
// Header `keyword,tag,text_topic,sf_topic,candidate,flags`, one row per keyword
// record; flags are ';'-separated.
std::string report_csv(std::span<const PipelineReport> reports);
std::string report_text(const PipelineReport& report);

std::string batch_json(const BatchResult& batch);
std::string batch_csv(const BatchResult& batch);
// Expected / Recovered / Percentage table, one row for the model.
std::string coverage_table(const CoverageSummary& summary, std::string_view model_name);
// 80 -> "80%", 77.6 -> "77.6%".
std::string format_percentage(double percent);

std::string classification_json(const ClassificationReport& report);
std::string confusion_text(const ConfusionMatrix& cm);

}  // namespace denise
