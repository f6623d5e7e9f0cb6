# Schemas package

