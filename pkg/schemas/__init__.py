# Schemas package: scenario documents and reports
