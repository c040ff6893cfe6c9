# Quandle Workbench Package